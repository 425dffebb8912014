// Command-line front end: run scenario files, built-in examples, surfaces.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gns/scenarios.hpp"

namespace {

constexpr int kSchemaExit = 2;
constexpr int kNumericExit = 3;

// Accepts plain numbers and multiples of pi such as "pi/4", "2*pi/3", "-pi".
double parse_value(const std::string& key, std::string text) {
  auto bad = [&]() -> double {
    throw gns::Error(gns::ErrorKind::SchemaError, "param." + key + ": cannot read '" + text + "'");
  };
  const auto pos = text.find("pi");
  try {
    if (pos == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      return used == text.size() ? v : bad();
    }
    std::string head = text.substr(0, pos);
    std::string tail = text.substr(pos + 2);
    double factor = 1.0;
    if (head == "-") {
      factor = -1.0;
    } else if (!head.empty()) {
      if (head.back() != '*') return bad();
      head.pop_back();
      std::size_t used = 0;
      factor = std::stod(head, &used);
      if (used != head.size()) return bad();
    }
    double divisor = 1.0;
    if (!tail.empty()) {
      if (tail.front() != '/') return bad();
      tail.erase(0, 1);
      std::size_t used = 0;
      divisor = std::stod(tail, &used);
      if (used != tail.size()) return bad();
    }
    return factor * std::numbers::pi / divisor;
  } catch (const std::logic_error&) {
    return bad();
  }
}

std::string render(const gns::Report& rep, const std::string& format) {
  if (format == "json") return rep.to_json().dump(2) + "\n";
  if (rep.surface) return gns::emit_surface(*rep.surface);
  if (rep.trajectory) {
    std::ostringstream os;
    os.precision(17);
    os << "time,entropy,rank\n";
    for (std::size_t i = 0; i < rep.trajectory->times.size(); ++i) {
      os << rep.trajectory->times[i] << ',' << rep.trajectory->entropies[i] << ','
         << rep.trajectory->ranks[i] << '\n';
    }
    return os.str();
  }
  throw gns::Error(gns::ErrorKind::SchemaError,
                   "format: csv output needs a surface or evolve task");
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw gns::Error(gns::ErrorKind::SchemaError, "out: cannot open '" + path + "'");
  f << text;
}

int fail(const gns::Error& e) {
  nlohmann::json payload = {{"error", std::string(gns::to_string(e.kind()))}, {"message", e.what()}};
  std::cerr << payload.dump() << '\n';
  return e.kind() == gns::ErrorKind::SchemaError ? kSchemaExit : kNumericExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GNS entanglement entropy engine"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, format = "json";
  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_path, "output file (default stdout)");
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string example_name;
  std::vector<std::string> params;
  auto* example = app.add_subcommand("example", "run a built-in example");
  example->add_option("name", example_name, "example name (see list)")->required();
  example->add_option("--param", params, "override a parameter, k=v");
  example->add_option("--out", out_path, "output file (default stdout)");
  example->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* list = app.add_subcommand("list", "list built-in examples");

  long long grid = 64;
  std::string projection = "raw";
  auto* surface = app.add_subcommand("surface", "two-boson entropy surface as CSV");
  surface->add_option("--grid", grid, "latitude subdivisions")->check(CLI::Range(2, 1024));
  surface->add_option("--projection", projection, "raw or stereographic")
      ->check(CLI::IsMember({"raw", "stereographic"}));
  surface->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kSchemaExit;
  }

  try {
    const gns::ScenarioDefaults defaults = gns::defaults_from_environment();
    if (*list) {
      for (const auto& e : gns::list_examples()) std::cout << e.name << "  " << e.description << '\n';
      return 0;
    }
    if (*run) {
      std::ifstream f(scenario_path);
      if (!f) throw gns::Error(gns::ErrorKind::SchemaError, "scenario: cannot open '" + scenario_path + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw gns::Error(gns::ErrorKind::SchemaError, std::string("scenario: ") + e.what());
      }
      const gns::Report rep = gns::run_scenario(gns::parse_scenario(doc, defaults));
      write_out(render(rep, format), out_path);
      return 0;
    }
    if (*example) {
      std::map<std::string, double> overrides;
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw gns::Error(gns::ErrorKind::SchemaError, "param: expected k=v, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        overrides[key] = parse_value(key, kv.substr(eq + 1));
      }
      const gns::Report rep = gns::run_scenario(gns::example_scenario(example_name, overrides, defaults));
      write_out(render(rep, format), out_path);
      return 0;
    }
    if (*surface) {
      const gns::SurfaceGrid g = gns::bose3_surface(grid, projection == "stereographic", defaults.seed,
                                                    gns::Tolerance(defaults.tolerance));
      write_out(gns::emit_surface(g), out_path);
      return 0;
    }
  } catch (const gns::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return kNumericExit;
  }
  return 0;
}
