#include "perc/run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace perc {

double RunConfig::threshold(int d) const {
  auto it = p_c.find(d);
  if (it == p_c.end())
    throw std::invalid_argument("no configured percolation threshold for d=" + std::to_string(d) +
                                "; add p_c.site.d" + std::to_string(d) + " to the config file");
  return it->second;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    try {
      if (key == "confidence") {
        cfg.confidence = std::stod(value);
        if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
          throw std::invalid_argument("confidence outside (0,1)");
      } else if (key == "dense_site_limit") {
        cfg.dense_site_limit = std::stoull(value);
      } else if (key == "enum_guard_sites") {
        cfg.enum_guard_sites = std::stoull(value);
      } else if (key == "origin_policy") {
        if (value == "include") cfg.origin_policy = OriginPolicy::include_origin;
        else if (value == "exclude") cfg.origin_policy = OriginPolicy::exclude_origin;
        else throw std::invalid_argument("origin_policy must be include or exclude");
      } else if (key.rfind("p_c.site.d", 0) == 0) {
        int d = std::stoi(key.substr(10));
        cfg.p_c[d] = std::stod(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& ex) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load_if_present(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) return RunConfig{};
  probe.close();
  return load(path);
}

std::string RunConfig::snapshot() const {
  std::ostringstream out;
  out << "confidence = " << confidence << "\n";
  out << "dense_site_limit = " << dense_site_limit << "\n";
  out << "enum_guard_sites = " << enum_guard_sites << "\n";
  out << "origin_policy = "
      << (origin_policy == OriginPolicy::include_origin ? "include" : "exclude") << "\n";
  for (const auto& [d, p] : p_c) out << "p_c.site.d" << d << " = " << p << "\n";
  return out.str();
}

}  // namespace perc
