#include "dfrc/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dfrc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ScenarioConfig parse_scenario_stream(std::istream& in) {
  ScenarioConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (trim(line) != "[scenario]")
        throw std::invalid_argument("config: unknown section " + line);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: malformed line " +
                                  std::to_string(lineno) + ": " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n_tx") cfg.n_tx = std::stoi(value);
      else if (key == "n_rx") cfg.n_rx = std::stoi(value);
      else if (key == "code_length") cfg.code_length = std::stoi(value);
      else if (key == "transmit_energy") cfg.transmit_energy = std::stod(value);
      else if (key == "noise_power") cfg.noise_power = std::stod(value);
      else if (key == "n_users") cfg.n_users = std::stoi(value);
      else if (key == "mui_budget") cfg.mui_budget = std::stod(value);
      else if (key == "symbol_energy") cfg.symbol_energy = std::stod(value);
      else if (key == "papr_limit") cfg.papr_limit = std::stod(value);
      else if (key == "rng_seed") cfg.rng_seed = std::stoull(value);
      else
        throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad value for key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_scenario_stream(in);
}

std::string scenario_to_text(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "n_tx = " << cfg.n_tx << "\n";
  os << "n_rx = " << cfg.n_rx << "\n";
  os << "code_length = " << cfg.code_length << "\n";
  os << "transmit_energy = " << cfg.transmit_energy << "\n";
  os << "noise_power = " << cfg.noise_power << "\n";
  os << "n_users = " << cfg.n_users << "\n";
  os << "mui_budget = " << cfg.mui_budget << "\n";
  os << "symbol_energy = " << cfg.symbol_energy << "\n";
  os << "papr_limit = " << cfg.papr_limit << "\n";
  os << "rng_seed = " << cfg.rng_seed << "\n";
  return os.str();
}

std::string scenario_hash(const ScenarioConfig& cfg) {
  const std::string text = scenario_to_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace dfrc
