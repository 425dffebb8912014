#include "gns/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "gns/qdeform.hpp"

namespace gns {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, path + ": " + msg);
}

// ---------------------------------------------------------------------------
// JSON <-> numbers

double read_real(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

Complex read_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema(path, "expected a number or a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector read_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a non-empty array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = read_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

ComplexMatrix read_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) schema(path + "[0]", "expected a row array");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) schema(rp, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          read_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json write_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

Json write_vector(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(write_complex(v(i)));
  return out;
}

Json write_matrix(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(write_complex(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) schema(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// ---------------------------------------------------------------------------
// Names

const std::map<std::string, std::vector<std::string>>& family_params() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"m2", {"lambda"}},
      {"bell", {"theta"}},
      {"fermi4", {"theta"}},
      {"fermi3", {"theta"}},
      {"bose3", {"theta", "phi"}},
      {"qboson", {"theta", "phi", "q"}},
      {"parity_toy", {"theta"}},
  };
  return m;
}

const std::set<std::string>& task_names() {
  static const std::set<std::string> t = {"gns",   "decompose", "entropy", "entropy_modes_compare",
                                          "evolve", "kraus",     "parity",  "collapse",
                                          "surface"};
  return t;
}

const std::set<std::string>& named_algebras() {
  static const std::set<std::string> n = {"bell_local",      "bell_plus",        "bell_minus",
                                          "bell_plus_minus", "parity_commutant", "projector_commutant"};
  return n;
}

std::string sector_name(Sector s) {
  switch (s) {
    case Sector::Full: return "full";
    case Sector::Symmetric: return "symmetric";
    case Sector::Antisymmetric: return "antisymmetric";
  }
  return "full";
}

std::string mode_name(DecompositionMode m) {
  switch (m) {
    case DecompositionMode::CanonicalSchmidt: return "canonical_schmidt";
    case DecompositionMode::RandomSplit: return "random_split";
    case DecompositionMode::IsotypicOnly: return "isotypic_only";
  }
  return "canonical_schmidt";
}

std::optional<SpaceSpec> family_space(const std::string& family) {
  SpaceSpec s;
  if (family == "m2" || family == "parity_toy") {
    s.dimension = 2;
  } else if (family == "bell") {
    s.dimension = 4;
  } else if (family == "fermi4") {
    s = {std::nullopt, 4, 2, Sector::Antisymmetric};
  } else if (family == "fermi3") {
    s = {std::nullopt, 3, 2, Sector::Antisymmetric};
  } else if (family == "bose3" || family == "qboson") {
    s = {std::nullopt, 3, 2, Sector::Symmetric};
  } else {
    return std::nullopt;
  }
  return s;
}

Index binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  Index r = 1;
  for (Index i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Index space_dimension(const SpaceSpec& s) {
  if (s.dimension) return *s.dimension;
  switch (s.sector) {
    case Sector::Antisymmetric: return binomial(s.one_particle_dim, s.particles);
    case Sector::Symmetric: return binomial(s.one_particle_dim + s.particles - 1, s.particles);
    case Sector::Full: {
      Index n = 1;
      for (Index i = 0; i < s.particles; ++i) n *= s.one_particle_dim;
      return n;
    }
  }
  return 0;
}

bool same_space(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.dimension || b.dimension) return a.dimension == b.dimension;
  return a.one_particle_dim == b.one_particle_dim && a.particles == b.particles &&
         a.sector == b.sector;
}

}  // namespace

// ---------------------------------------------------------------------------
// Environment and schema

ScenarioDefaults defaults_from_environment() {
  ScenarioDefaults d;
  if (const char* s = std::getenv("GNS_SEED"); s && *s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0' || s[0] == '-') schema("GNS_SEED", "expected a non-negative integer");
    d.seed = v;
  }
  if (const char* s = std::getenv("GNS_TOL"); s && *s) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (*end != '\0' || !(v >= 0.0) || !std::isfinite(v)) {
      schema("GNS_TOL", "expected a non-negative number");
    }
    d.tolerance = v;
  }
  return d;
}

Scenario parse_scenario(const Json& doc, const ScenarioDefaults& defaults) {
  if (!doc.is_object()) schema("$", "scenario must be an object");
  reject_unknown(doc, "", {"name", "tolerance", "seed", "log_base", "space", "state", "subalgebra",
                           "tasks", "options"});
  Scenario s;
  s.seed = defaults.seed;
  s.tolerance = defaults.tolerance;

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) schema("name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("tolerance")) {
    s.tolerance = read_real(doc["tolerance"], "tolerance");
    if (!(s.tolerance >= 0.0)) schema("tolerance", "must be non-negative");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      if (!doc["seed"].is_number_unsigned()) schema("seed", "expected a non-negative integer");
    }
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("log_base")) {
    const Json& b = doc["log_base"];
    if (b == "e" || b == "natural") {
      s.log_base = LogBase::Natural;
    } else if (b == "2" || b == 2) {
      s.log_base = LogBase::Two;
    } else {
      schema("log_base", "expected \"e\" or \"2\"");
    }
  }

  // state
  if (!doc.contains("state")) schema("state", "missing");
  {
    const Json& st = doc["state"];
    if (!st.is_object()) schema("state", "expected an object");
    reject_unknown(st, "state", {"vector", "density", "family", "params"});
    const int count = int(st.contains("vector")) + int(st.contains("density")) + int(st.contains("family"));
    if (count != 1) schema("state", "give exactly one of vector, density, family");
    if (st.contains("vector")) s.state.vector = read_vector(st["vector"], "state.vector");
    if (st.contains("density")) s.state.density = read_matrix(st["density"], "state.density");
    if (st.contains("family")) {
      if (!st["family"].is_string()) schema("state.family", "expected a string");
      const std::string fam = st["family"].get<std::string>();
      const auto it = family_params().find(fam);
      if (it == family_params().end()) schema("state.family", "unknown family '" + fam + "'");
      s.state.family = fam;
      const Json params = st.contains("params") ? st["params"] : Json::object();
      if (!params.is_object()) schema("state.params", "expected an object");
      for (auto p = params.begin(); p != params.end(); ++p) {
        if (std::find(it->second.begin(), it->second.end(), p.key()) == it->second.end()) {
          schema("state.params." + p.key(), "not a parameter of family " + fam);
        }
        s.state.params[p.key()] = read_real(p.value(), "state.params." + p.key());
      }
      for (const auto& name : it->second) {
        if (!s.state.params.count(name)) schema("state.params." + name, "missing");
      }
    } else if (st.contains("params")) {
      schema("state.params", "only valid with a family");
    }
  }

  // space
  if (doc.contains("space")) {
    const Json& sp = doc["space"];
    if (!sp.is_object()) schema("space", "expected an object");
    reject_unknown(sp, "space", {"dimension", "one_particle_dim", "particles", "sector"});
    SpaceSpec spec;
    if (sp.contains("dimension")) {
      if (sp.size() != 1) schema("space", "dimension excludes the particle fields");
      if (!sp["dimension"].is_number_integer() || sp["dimension"].get<long long>() < 1) {
        schema("space.dimension", "expected a positive integer");
      }
      spec.dimension = sp["dimension"].get<Index>();
    } else {
      for (const char* k : {"one_particle_dim", "particles", "sector"}) {
        if (!sp.contains(k)) schema(std::string("space.") + k, "missing");
      }
      for (const char* k : {"one_particle_dim", "particles"}) {
        if (!sp[k].is_number_integer() || sp[k].get<long long>() < 1) {
          schema(std::string("space.") + k, "expected a positive integer");
        }
      }
      spec.one_particle_dim = sp["one_particle_dim"].get<Index>();
      spec.particles = sp["particles"].get<Index>();
      const Json& sec = sp["sector"];
      if (sec == "full") {
        spec.sector = Sector::Full;
      } else if (sec == "symmetric") {
        spec.sector = Sector::Symmetric;
      } else if (sec == "antisymmetric") {
        spec.sector = Sector::Antisymmetric;
      } else {
        schema("space.sector", "expected full, symmetric or antisymmetric");
      }
    }
    s.space = spec;
  }
  if (s.state.family) {
    const SpaceSpec implied = *family_space(*s.state.family);
    if (s.space && !same_space(*s.space, implied)) {
      schema("space", "does not match the space of family " + *s.state.family);
    }
    s.space = implied;
  }
  if (!s.space) schema("space", "missing (required unless a state family is given)");
  const Index ambient = space_dimension(*s.space);
  if (ambient < 1 || ambient > 64) schema("space", "dimension must lie in 1..64");
  if (s.state.vector && s.state.vector->size() != ambient) {
    schema("state.vector", "length differs from the space dimension " + std::to_string(ambient));
  }
  if (s.state.density &&
      (s.state.density->rows() != ambient || s.state.density->cols() != ambient)) {
    schema("state.density", "must be " + std::to_string(ambient) + " x " + std::to_string(ambient));
  }

  auto square_of_ambient = [&](const ComplexMatrix& m, const std::string& path) {
    if (m.rows() != ambient || m.cols() != ambient) {
      schema(path, "must be " + std::to_string(ambient) + " x " + std::to_string(ambient));
    }
  };

  // subalgebra
  if (!doc.contains("subalgebra")) schema("subalgebra", "missing");
  {
    const Json& sa = doc["subalgebra"];
    if (!sa.is_object()) schema("subalgebra", "expected an object");
    reject_unknown(sa, "subalgebra",
                   {"generators", "include_identity", "levels", "named", "parity", "projector"});
    const int count = int(sa.contains("generators")) + int(sa.contains("levels")) + int(sa.contains("named"));
    if (count != 1) schema("subalgebra", "give exactly one of generators, levels, named");
    if (sa.contains("generators")) {
      s.subalgebra.kind = SubalgebraSpec::Kind::Generators;
      const Json& g = sa["generators"];
      if (!g.is_array() || g.empty()) schema("subalgebra.generators", "expected a non-empty array");
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string path = "subalgebra.generators[" + std::to_string(i) + "]";
        s.subalgebra.generators.push_back(read_matrix(g[i], path));
        square_of_ambient(s.subalgebra.generators.back(), path);
      }
      if (sa.contains("include_identity")) {
        if (!sa["include_identity"].is_boolean()) schema("subalgebra.include_identity", "expected a boolean");
        s.subalgebra.include_identity = sa["include_identity"].get<bool>();
      }
    } else if (sa.contains("include_identity")) {
      schema("subalgebra.include_identity", "only valid with generators");
    }
    if (sa.contains("levels")) {
      s.subalgebra.kind = SubalgebraSpec::Kind::Levels;
      if (s.space->dimension) schema("subalgebra.levels", "needs a particle space");
      const Json& l = sa["levels"];
      if (!l.is_array() || l.empty()) schema("subalgebra.levels", "expected a non-empty array");
      for (std::size_t i = 0; i < l.size(); ++i) {
        const std::string path = "subalgebra.levels[" + std::to_string(i) + "]";
        if (!l[i].is_number_integer()) schema(path, "expected an integer");
        const Index v = l[i].get<Index>();
        if (v < 1 || v > s.space->one_particle_dim) {
          schema(path, "level must lie in 1.." + std::to_string(s.space->one_particle_dim));
        }
        if (std::find(s.subalgebra.levels.begin(), s.subalgebra.levels.end(), v) !=
            s.subalgebra.levels.end()) {
          schema(path, "repeated level");
        }
        s.subalgebra.levels.push_back(v);
      }
    }
    if (sa.contains("named")) {
      s.subalgebra.kind = SubalgebraSpec::Kind::Named;
      if (!sa["named"].is_string() || !named_algebras().count(sa["named"].get<std::string>())) {
        schema("subalgebra.named", "unknown named subalgebra");
      }
      s.subalgebra.named = sa["named"].get<std::string>();
      const std::string& n = s.subalgebra.named;
      if (n.rfind("bell_", 0) == 0 && ambient != 4) {
        schema("subalgebra.named", n + " needs a space of dimension 4");
      }
      const char* key = n == "parity_commutant" ? "parity" : n == "projector_commutant" ? "projector" : nullptr;
      if (key) {
        if (!sa.contains(key)) schema(join("subalgebra", key), "missing");
        s.subalgebra.matrix = read_matrix(sa[key], join("subalgebra", key));
        square_of_ambient(*s.subalgebra.matrix, join("subalgebra", key));
      }
      for (const char* k : {"parity", "projector"}) {
        if (sa.contains(k) && (!key || std::string(k) != key)) {
          schema(join("subalgebra", k), "not used by " + n);
        }
      }
    } else {
      for (const char* k : {"parity", "projector"}) {
        if (sa.contains(k)) schema(join("subalgebra", k), "only valid with a named commutant");
      }
    }
  }

  // tasks
  if (doc.contains("tasks")) {
    const Json& t = doc["tasks"];
    if (!t.is_array() || t.empty()) schema("tasks", "expected a non-empty array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string path = "tasks[" + std::to_string(i) + "]";
      if (!t[i].is_string() || !task_names().count(t[i].get<std::string>())) {
        schema(path, "unknown task");
      }
      const std::string name = t[i].get<std::string>();
      if (std::find(s.tasks.begin(), s.tasks.end(), name) != s.tasks.end()) schema(path, "repeated task");
      s.tasks.push_back(name);
    }
  } else {
    s.tasks = {"gns", "decompose", "entropy"};
  }

  // options
  if (doc.contains("options")) {
    const Json& o = doc["options"];
    if (!o.is_object()) schema("options", "expected an object");
    reject_unknown(o, "options", {"mode", "times", "hamiltonian", "kraus_pairs", "compare_seeds",
                                  "parity", "corner_plus", "odd_elements", "projector", "grid",
                                  "projection"});
    ScenarioOptions& op = s.options;
    if (o.contains("mode")) {
      const Json& m = o["mode"];
      if (m == "canonical_schmidt") {
        op.mode = DecompositionMode::CanonicalSchmidt;
      } else if (m == "random_split") {
        op.mode = DecompositionMode::RandomSplit;
      } else if (m == "isotypic_only") {
        op.mode = DecompositionMode::IsotypicOnly;
      } else {
        schema("options.mode", "expected canonical_schmidt, random_split or isotypic_only");
      }
    }
    if (o.contains("times")) {
      const Json& t = o["times"];
      if (!t.is_array() || t.empty()) schema("options.times", "expected a non-empty array");
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string path = "options.times[" + std::to_string(i) + "]";
        op.times.push_back(read_real(t[i], path));
        if (i > 0 && !(op.times[i] > op.times[i - 1])) schema(path, "times must increase");
      }
    }
    if (o.contains("hamiltonian")) {
      op.hamiltonian = read_matrix(o["hamiltonian"], "options.hamiltonian");
      square_of_ambient(*op.hamiltonian, "options.hamiltonian");
    }
    if (o.contains("kraus_pairs")) {
      const Json& k = o["kraus_pairs"];
      if (!k.is_array() || k.empty()) schema("options.kraus_pairs", "expected a non-empty array");
      for (std::size_t i = 0; i < k.size(); ++i) {
        const std::string path = "options.kraus_pairs[" + std::to_string(i) + "]";
        if (!k[i].is_array() || k[i].size() != 2) schema(path, "expected [theta_from, theta_to]");
        op.kraus_pairs.push_back({read_real(k[i][0], path + "[0]"), read_real(k[i][1], path + "[1]")});
      }
    }
    if (o.contains("compare_seeds")) {
      if (!o["compare_seeds"].is_number_integer() || o["compare_seeds"].get<long long>() < 1) {
        schema("options.compare_seeds", "expected a positive integer");
      }
      op.compare_seeds = o["compare_seeds"].get<Index>();
    }
    for (const char* k : {"parity", "corner_plus", "projector"}) {
      if (!o.contains(k)) continue;
      ComplexMatrix m = read_matrix(o[k], join("options", k));
      square_of_ambient(m, join("options", k));
      if (std::string(k) == "parity") op.parity = std::move(m);
      if (std::string(k) == "corner_plus") op.corner_plus = std::move(m);
      if (std::string(k) == "projector") op.projector = std::move(m);
    }
    if (o.contains("odd_elements")) {
      const Json& e = o["odd_elements"];
      if (!e.is_array()) schema("options.odd_elements", "expected an array");
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string path = "options.odd_elements[" + std::to_string(i) + "]";
        op.odd_elements.push_back(read_matrix(e[i], path));
        square_of_ambient(op.odd_elements.back(), path);
      }
    }
    if (o.contains("grid")) {
      if (!o["grid"].is_number_integer() || o["grid"].get<long long>() < 2 ||
          o["grid"].get<long long>() > 1024) {
        schema("options.grid", "expected an integer in 2..1024");
      }
      op.grid = o["grid"].get<Index>();
    }
    if (o.contains("projection")) {
      const Json& p = o["projection"];
      if (p == "stereographic") {
        op.stereographic = true;
      } else if (p == "raw") {
        op.stereographic = false;
      } else {
        schema("options.projection", "expected raw or stereographic");
      }
    }
  }

  // Cross-field requirements of the tasks.
  auto has_task = [&](const char* t) {
    return std::find(s.tasks.begin(), s.tasks.end(), t) != s.tasks.end();
  };
  const std::string fam = s.state.family.value_or("");
  if (has_task("evolve")) {
    if (s.options.times.empty()) schema("options.times", "required by the evolve task");
    if (!s.options.hamiltonian && fam != "fermi3") {
      schema("options.hamiltonian", "required by the evolve task");
    }
  }
  if (has_task("kraus")) {
    if (!s.state.params.count("theta")) schema("state.family", "kraus needs a family with theta");
    if (s.options.kraus_pairs.empty()) schema("options.kraus_pairs", "required by the kraus task");
  }
  if (has_task("parity") && !s.options.parity && s.subalgebra.named != "parity_commutant" &&
      fam != "parity_toy") {
    schema("options.parity", "required by the parity task");
  }
  if (has_task("collapse") && !s.options.projector && s.subalgebra.named != "projector_commutant") {
    schema("options.projector", "required by the collapse task");
  }
  if (has_task("surface") && (!s.state.params.count("theta") || !s.state.params.count("phi"))) {
    schema("state.family", "surface needs a family with theta and phi");
  }
  return s;
}

Json serialize_scenario(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["tolerance"] = s.tolerance;
  j["seed"] = s.seed;
  j["log_base"] = s.log_base == LogBase::Two ? "2" : "e";
  if (s.state.family) {
    j["state"]["family"] = *s.state.family;
    Json params = Json::object();
    for (const auto& [k, v] : s.state.params) params[k] = v;
    j["state"]["params"] = params;
  } else {
    if (s.space) {
      if (s.space->dimension) {
        j["space"]["dimension"] = *s.space->dimension;
      } else {
        j["space"]["one_particle_dim"] = s.space->one_particle_dim;
        j["space"]["particles"] = s.space->particles;
        j["space"]["sector"] = sector_name(s.space->sector);
      }
    }
    if (s.state.vector) j["state"]["vector"] = write_vector(*s.state.vector);
    if (s.state.density) j["state"]["density"] = write_matrix(*s.state.density);
  }
  Json& sa = j["subalgebra"];
  switch (s.subalgebra.kind) {
    case SubalgebraSpec::Kind::Generators: {
      sa["generators"] = Json::array();
      for (const auto& g : s.subalgebra.generators) sa["generators"].push_back(write_matrix(g));
      sa["include_identity"] = s.subalgebra.include_identity;
      break;
    }
    case SubalgebraSpec::Kind::Levels:
      sa["levels"] = s.subalgebra.levels;
      break;
    case SubalgebraSpec::Kind::Named:
      sa["named"] = s.subalgebra.named;
      if (s.subalgebra.matrix) {
        sa[s.subalgebra.named == "parity_commutant" ? "parity" : "projector"] =
            write_matrix(*s.subalgebra.matrix);
      }
      break;
  }
  j["tasks"] = s.tasks;
  const ScenarioOptions& o = s.options;
  Json& oj = j["options"];
  oj = Json::object();
  oj["mode"] = mode_name(o.mode);
  if (!o.times.empty()) oj["times"] = o.times;
  if (o.hamiltonian) oj["hamiltonian"] = write_matrix(*o.hamiltonian);
  if (!o.kraus_pairs.empty()) {
    oj["kraus_pairs"] = Json::array();
    for (const auto& p : o.kraus_pairs) oj["kraus_pairs"].push_back({p[0], p[1]});
  }
  oj["compare_seeds"] = o.compare_seeds;
  if (o.parity) oj["parity"] = write_matrix(*o.parity);
  if (o.corner_plus) oj["corner_plus"] = write_matrix(*o.corner_plus);
  if (!o.odd_elements.empty()) {
    oj["odd_elements"] = Json::array();
    for (const auto& e : o.odd_elements) oj["odd_elements"].push_back(write_matrix(e));
  }
  if (o.projector) oj["projector"] = write_matrix(*o.projector);
  oj["grid"] = o.grid;
  oj["projection"] = o.stereographic ? "stereographic" : "raw";
  return j;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

// ---------------------------------------------------------------------------
// Materialization

namespace {

ComplexMatrix pauli(int mu) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (mu) {
    case 0: s(0, 0) = 1.0; s(1, 1) = 1.0; break;
    case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 2: s(0, 1) = Complex(0.0, -1.0); s(1, 0) = Complex(0.0, 1.0); break;
    default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
  }
  return s;
}

double param(const Scenario& s, const char* key) { return s.state.params.at(key); }

// The state of the scenario as a density on the ambient space.
ComplexMatrix family_density(const std::string& fam, const std::map<std::string, double>& p) {
  auto pure = [](const ComplexVector& v) { return ComplexMatrix(v * v.adjoint() / v.squaredNorm()); };
  if (fam == "m2") {
    const double l = p.at("lambda");
    if (!(l >= 0.0 && l <= 1.0)) schema("state.params.lambda", "must lie in [0, 1]");
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = l;
    rho(1, 1) = 1.0 - l;
    return rho;
  }
  const double theta = p.at("theta");
  if (fam == "bell") {
    ComplexVector v = ComplexVector::Zero(4);
    v(1) = std::cos(theta);   // |+->
    v(2) = -std::sin(theta);  // |-+>
    return pure(v);
  }
  if (fam == "parity_toy") {
    ComplexVector v(2);
    v << std::cos(theta), std::sin(theta);
    return pure(v);
  }
  if (fam == "fermi4") return pure(fermi4_state(theta));
  if (fam == "fermi3") return pure(fermi3_state(theta));
  if (fam == "bose3") return pure(bose3_state(theta, p.at("phi")));
  if (fam == "qboson") {
    const double q = p.at("q");
    if (!(q > 0.0)) schema("state.params.q", "must be positive");
    return pure(q_boson_state(theta, p.at("phi"), q));
  }
  schema("state.family", "unknown family '" + fam + "'");
}

ComplexMatrix scenario_density(const Scenario& s) {
  if (s.state.family) return family_density(*s.state.family, s.state.params);
  if (s.state.vector) {
    const ComplexVector& v = *s.state.vector;
    if (!(v.norm() > 0.0)) throw Error(ErrorKind::ZeroVector, "state.vector is zero");
    return v * v.adjoint() / v.squaredNorm();
  }
  return *s.state.density;
}

ParticleSpace scenario_particle_space(const Scenario& s) {
  const std::string fam = s.state.family.value_or("");
  if (fam == "fermi4") return fermi4_space();
  if (fam == "fermi3") return fermi3_space();
  if (fam == "bose3") return bose3_space();
  return make_particle_space(s.space->one_particle_dim, s.space->particles, s.space->sector);
}

MatrixAlgebra scenario_algebra(const Scenario& s, Tolerance tol) {
  const SubalgebraSpec& sa = s.subalgebra;
  switch (sa.kind) {
    case SubalgebraSpec::Kind::Generators:
      return generate_algebra(sa.generators, sa.include_identity, tol);
    case SubalgebraSpec::Kind::Levels: {
      std::vector<Index> zero_based;
      for (Index l : sa.levels) zero_based.push_back(l - 1);
      if (s.state.family == "qboson") {
        const QBosonSetup setup = q_boson_setup(param(s, "theta"), param(s, "phi"), param(s, "q"),
                                                QBosonObservables::Generated, tol);
        return q_boson_level_observables(setup, zero_based, tol);
      }
      return one_particle_subalgebra(scenario_particle_space(s), zero_based, tol);
    }
    case SubalgebraSpec::Kind::Named: {
      const std::string& n = sa.named;
      const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
      std::vector<ComplexMatrix> gens;
      if (n == "bell_local") {
        for (int mu = 0; mu < 4; ++mu) gens.push_back(kron(pauli(mu), id2));
        return generate_algebra(gens, true, tol);
      }
      if (n == "bell_plus" || n == "bell_minus" || n == "bell_plus_minus") {
        const ComplexMatrix up = 0.5 * (id2 + pauli(3));
        const ComplexMatrix down = 0.5 * (id2 - pauli(3));
        for (int mu = 0; mu < 4; ++mu) {
          if (n != "bell_minus") gens.push_back(kron(pauli(mu), up));
          if (n != "bell_plus") gens.push_back(kron(pauli(mu), down));
        }
        return generate_algebra(gens, false, tol);
      }
      const std::vector<ComplexMatrix> ops = {*sa.matrix};
      if (n == "parity_commutant") return parity_commutant_setup(*sa.matrix, tol).even_subalgebra;
      return relative_commutant(ops, nullptr, tol);
    }
  }
  schema("subalgebra", "unsupported form");
}

bool wants(const Scenario& s, const char* task) {
  return std::find(s.tasks.begin(), s.tasks.end(), task) != s.tasks.end();
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Entropy over sphere_grid(n) of the scenario's (theta, phi) family.
SurfaceGrid family_surface(const Scenario& s, const MatrixAlgebra& a0, Index n, bool stereo,
                           unsigned threads) {
  const Tolerance tol(s.tolerance);
  const BlockStructure bs = block_structure(a0, s.seed, tol);
  const auto points = sphere_grid(n);
  SurfaceGrid grid;
  grid.subdivisions = n;
  grid.stereographic = stereo;
  grid.rows.resize(points.size());

  const std::string fam = *s.state.family;
  auto work = [&](std::size_t begin, std::size_t end) {
    std::map<std::string, double> p = s.state.params;
    for (std::size_t i = begin; i < end; ++i) {
      p["theta"] = points[i][0];
      p["phi"] = points[i][1];
      const AlgebraState omega(family_density(fam, p), tol);
      SurfaceRow& row = grid.rows[i];
      row.theta = points[i][0];
      row.phi = points[i][1];
      const auto xy = stereographic(row.theta, row.phi);
      row.x = stereo ? xy[0] : row.theta;
      row.y = stereo ? xy[1] : row.phi;
      row.entropy = canonical_entropy(bs, restrict_state(omega, a0), tol, s.log_base).entropy;
    }
  };

  const unsigned workers = worker_count(threads, points.size());
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (points.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = std::min(points.size(), w * chunk);
    const std::size_t e = std::min(points.size(), b + chunk);
    pool.emplace_back([&, w, b, e] {
      try {
        work(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grid;
}

std::string error_kind_name(const Error& e) { return std::string(to_string(e.kind())); }

}  // namespace

std::vector<std::array<double, 2>> sphere_grid(Index n) {
  if (n < 2) schema("grid", "needs at least 2 subdivisions");
  std::vector<std::array<double, 2>> pts;
  pts.push_back({0.0, 0.0});
  for (Index i = 1; i < n; ++i) {
    const double theta = kPi * static_cast<double>(i) / static_cast<double>(n);
    for (Index j = 0; j < n; ++j) {
      pts.push_back({theta, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n)});
    }
  }
  pts.push_back({kPi, 0.0});
  return pts;
}

std::array<double, 2> stereographic(double theta, double phi) {
  const double x = std::sin(theta) * std::cos(phi);
  const double y = std::sin(theta) * std::sin(phi);
  const double z = std::cos(theta);
  const double denom = 1.0 - z;
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return {x / denom, y / denom};
}

std::string emit_surface(const SurfaceGrid& grid) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "x,y,entropy\n";
  for (const auto& r : grid.rows) {
    if (grid.stereographic && !std::isfinite(r.x)) continue;
    os << r.x << ',' << r.y << ',' << r.entropy << '\n';
  }
  return os.str();
}

SurfaceGrid bose3_surface(Index n, bool stereo, std::uint64_t seed, Tolerance tol, unsigned threads) {
  Scenario s;
  s.seed = seed;
  s.tolerance = tol.epsilon;
  s.space = family_space("bose3");
  s.state.family = "bose3";
  s.state.params = {{"theta", 0.0}, {"phi", 0.0}};
  s.subalgebra.kind = SubalgebraSpec::Kind::Levels;
  s.subalgebra.levels = {1, 2};
  const MatrixAlgebra a0 = scenario_algebra(s, tol);
  return family_surface(s, a0, n, stereo, threads);
}

// ---------------------------------------------------------------------------
// Running

Report run_scenario(const Scenario& s) {
  const Tolerance tol(s.tolerance);
  Report rep;
  rep.scenario = s;
  const AlgebraState omega(scenario_density(s), tol);
  const MatrixAlgebra a0 = scenario_algebra(s, tol);
  rep.ambient_dimension = omega.ambient_dim();
  rep.algebra_dimension = a0.dim();
  const RestrictedState restricted = restrict_state(omega, a0);

  if (wants(s, "entropy")) {
    const CanonicalEntropy ce = canonical_entropy(restricted, s.seed, tol, s.log_base);
    rep.entropy = ce.entropy;
    rep.spectrum = ce.spectrum(tol);
  }

  const bool need_gns = wants(s, "gns") || wants(s, "decompose") || wants(s, "entropy_modes_compare");
  if (need_gns) {
    const GnsRepresentation g = build_gns(restricted, tol);
    if (wants(s, "gns")) {
      rep.gns_dimension = g.dimension();
      rep.ideal_dimension = g.ideal_dimension();
      rep.diagnostics = verify_gns(g, tol);
    }
    if (wants(s, "decompose")) {
      const GnsDecomposition dec = decompose(g, s.options.mode, s.seed, tol);
      for (std::size_t i = 0; i < dec.weights.size(); ++i) {
        const auto k = static_cast<std::size_t>(dec.block_of[i]);
        rep.blocks.push_back({dec.block_dims[k], dec.block_multiplicities[k], dec.weights[i]});
      }
      std::stable_sort(rep.blocks.begin(), rep.blocks.end(), [](const BlockSummary& a, const BlockSummary& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.d > b.d;
      });
      rep.decomposition_entropy = gns_entropy(dec, s.log_base, tol);
    }
    if (wants(s, "entropy_modes_compare")) {
      ModeComparison c;
      c.canonical = gns_entropy(decompose(g, DecompositionMode::CanonicalSchmidt, s.seed, tol), s.log_base, tol);
      c.isotypic = gns_entropy(decompose(g, DecompositionMode::IsotypicOnly, s.seed, tol), s.log_base, tol);
      c.seeds = s.options.compare_seeds;
      for (Index i = 0; i < c.seeds; ++i) {
        const double r = gns_entropy(
            decompose(g, DecompositionMode::RandomSplit, s.seed + static_cast<std::uint64_t>(i), tol),
            s.log_base, tol);
        c.random_min = i == 0 ? r : std::min(c.random_min, r);
        c.random_max = i == 0 ? r : std::max(c.random_max, r);
      }
      rep.comparison = c;
    }
  }

  if (wants(s, "evolve")) {
    const ComplexMatrix h = s.options.hamiltonian ? *s.options.hamiltonian : fermi3_rotation_hamiltonian();
    rep.trajectory = restricted_trajectory(omega, h, a0, s.options.times, s.seed, tol, s.log_base);
  }

  if (wants(s, "kraus")) {
    const BlockStructure bs = block_structure(a0, s.seed, tol);
    auto density_at = [&](double theta) {
      std::map<std::string, double> p = s.state.params;
      p["theta"] = theta;
      const AlgebraState w(family_density(*s.state.family, p), tol);
      return canonical_entropy(bs, restrict_state(w, a0), tol).assembled();
    };
    for (const auto& pair : s.options.kraus_pairs) {
      KrausSummary k;
      k.theta_from = pair[0];
      k.theta_to = pair[1];
      try {
        const KrausPair kp = kraus_maps(density_at(pair[0]), density_at(pair[1]), tol);
        k.residual = kp.residual();
        k.map_count = static_cast<Index>(kp.maps.size());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankIncrease) throw;
        k.error = error_kind_name(e);
      }
      rep.kraus.push_back(k);
    }
  }

  if (wants(s, "parity")) {
    ParitySetup setup;
    if (s.options.parity) {
      setup.parity = *s.options.parity;
    } else if (s.subalgebra.named == "parity_commutant") {
      setup.parity = *s.subalgebra.matrix;
    } else {
      setup.parity = ComplexMatrix::Identity(2, 2);
      setup.parity(1, 1) = -1.0;
    }
    setup.even_subalgebra = a0;
    if (s.options.corner_plus) {
      const Index n = rep.ambient_dimension;
      setup.corners = CornerProjectors{*s.options.corner_plus,
                                       ComplexMatrix::Identity(n, n) - *s.options.corner_plus};
    }
    setup.odd_elements = s.options.odd_elements;
    rep.parity = parity_restriction_vs_average(omega, setup, s.seed, tol);
  }

  if (wants(s, "collapse")) {
    const ComplexMatrix p = s.options.projector ? *s.options.projector : *s.subalgebra.matrix;
    rep.collapse = measurement_restriction(omega, p, s.seed, tol, &a0);
  }

  if (wants(s, "surface")) {
    rep.surface = family_surface(s, a0, s.options.grid, s.options.stereographic, 0);
  }
  return rep;
}

namespace {

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

Json Report::to_json() const {
  Json j;
  j["scenario"] = serialize_scenario(scenario);
  j["ambient_dimension"] = ambient_dimension;
  j["algebra_dimension"] = algebra_dimension;
  j["log_base"] = scenario.log_base == LogBase::Two ? "2" : "e";
  if (gns_dimension) j["gns_dimension"] = *gns_dimension;
  if (ideal_dimension) j["ideal_dimension"] = *ideal_dimension;
  if (entropy) {
    j["entropy"] = *entropy;
    j["spectrum"] = spectrum;
  }
  if (decomposition_entropy) {
    j["mode"] = mode_name(scenario.options.mode);
    j["decomposition_entropy"] = *decomposition_entropy;
    j["blocks"] = Json::array();
    for (const auto& b : blocks) j["blocks"].push_back({{"d", b.d}, {"m", b.m}, {"weight", b.weight}});
  }
  if (diagnostics) {
    j["diagnostics"] = {{"homomorphism", diagnostics->homomorphism},
                        {"star", diagnostics->star},
                        {"reconstruction", diagnostics->reconstruction},
                        {"cyclic_rank", diagnostics->cyclic_rank},
                        {"cyclic", diagnostics->cyclic()},
                        {"max_deviation", diagnostics->max_deviation()}};
  }
  if (comparison) {
    j["entropy_modes"] = {{"canonical_schmidt", comparison->canonical},
                          {"isotypic_only", comparison->isotypic},
                          {"random_split_min", comparison->random_min},
                          {"random_split_max", comparison->random_max},
                          {"seeds", comparison->seeds}};
  }
  if (trajectory) {
    Json t;
    t["times"] = trajectory->times;
    t["entropies"] = trajectory->entropies;
    t["ranks"] = trajectory->ranks;
    t["weights"] = trajectory->weights_path;
    t["rank_changes"] = Json::array();
    for (const auto& e : trajectory->events) {
      t["rank_changes"].push_back({{"time_before", e.time_before},
                                   {"time_after", e.time_after},
                                   {"rank_before", e.rank_before},
                                   {"rank_after", e.rank_after}});
    }
    j["trajectory"] = std::move(t);
  }
  if (!kraus.empty()) {
    j["kraus"] = Json::array();
    for (const auto& k : kraus) {
      Json e = {{"theta_from", k.theta_from}, {"theta_to", k.theta_to}};
      if (k.residual) {
        e["residual"] = *k.residual;
        e["maps"] = k.map_count;
      }
      if (k.error) e["error"] = *k.error;
      j["kraus"].push_back(std::move(e));
    }
  }
  if (parity) {
    Json p = {{"algebra_dimension", parity->algebra_dimension},
              {"max_deviation", parity->max_deviation},
              {"restricted_entropy", parity->restricted_entropy},
              {"averaged_entropy", parity->averaged_entropy}};
    if (parity->corner_weights) p["corner_weights"] = *parity->corner_weights;
    j["parity"] = std::move(p);
  }
  if (collapse) {
    j["collapse"] = {{"algebra_dimension", collapse->observables.dim()},
                     {"max_deviation", collapse->max_deviation},
                     {"restricted_entropy", collapse->restricted_entropy},
                     {"collapsed_entropy", collapse->collapsed_entropy},
                     {"weights", collapse->weights},
                     {"gns_dimension", collapse->gns_dimension}};
  }
  if (surface) {
    Json rows = Json::array();
    Index zeros = 0;
    for (const auto& r : surface->rows) {
      if (std::abs(r.entropy) <= 1e-12) ++zeros;
      if (surface->stereographic && !std::isfinite(r.x)) continue;
      rows.push_back({json_number(r.x), json_number(r.y), r.entropy});
    }
    j["surface"] = {{"subdivisions", surface->subdivisions},
                    {"projection", surface->stereographic ? "stereographic" : "raw"},
                    {"samples", surface->rows.size()},
                    {"zeros", zeros},
                    {"columns", {"x", "y", "entropy"}},
                    {"rows", std::move(rows)}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Built-in examples

const std::vector<ExampleInfo>& list_examples() {
  static const std::vector<ExampleInfo> ex = {
      {"m2-lambda", "M2(C) with the diagonal state lambda e11 + (1 - lambda) e22",
       {{"lambda", 0.5}}},
      {"bell-theta", "two qubits cos(t)|+-> - sin(t)|-+> seen by the local algebra {sigma_mu (x) 1}",
       {{"theta", kPi / 4}}},
      {"bell-corners", "Bell state on the corner algebras A+, A- or A+ (+) A- (corner = 1, -1, 0)",
       {{"theta", kPi / 4}, {"corner", 0.0}}},
      {"fermi4", "two fermions, antisymmetric d=4 sector, observables of levels 1 and 2",
       {{"theta", 0.6}}},
      {"fermi3-choice1", "two fermions on C^3 with the full one-particle algebra", {{"theta", 0.7}}},
      {"fermi3-choice2", "two fermions on C^3 observed through levels 1 and 2 only", {{"theta", 1.0}}},
      {"bose3-surface", "two bosons on C^3, levels 1 and 2, entropy over the (theta, phi) sphere",
       {{"theta", 1.0}, {"phi", 0.7}, {"grid", 64.0}, {"stereographic", 0.0}}},
      {"qboson", "two q-bosons in three modes, observables of modes 1 and 2",
       {{"theta", 1.0}, {"phi", 0.7}, {"q", 2.0}}},
      {"evolve-fermi3", "rotation of the two-fermion C^3 state, rank and entropy along the flow",
       {{"theta", 0.0}, {"steps", 8.0}, {"t_max", kPi}}},
      {"kraus", "Kraus maps between restricted two-fermion states at two angles",
       {{"from", kPi / 4}, {"to", kPi / 3}}},
      {"parity-toy", "C^2 with P = diag(1, -1): restriction against parity averaging",
       {{"theta", 0.4}}},
      {"collapse", "Bell state restricted to the commutant of (1 + sigma3)/2 (x) 1",
       {{"theta", kPi / 4}}},
  };
  return ex;
}

Scenario example_scenario(const std::string& name, const std::map<std::string, double>& params,
                          const ScenarioDefaults& defaults) {
  const auto& reg = list_examples();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const ExampleInfo& e) { return e.name == name; });
  if (it == reg.end()) schema("example", "unknown example '" + name + "'");
  std::map<std::string, double> p = it->defaults;
  for (const auto& [k, v] : params) {
    if (!p.count(k)) schema("param." + k, "not a parameter of " + name);
    p[k] = v;
  }

  Json doc;
  doc["name"] = name;
  doc["tasks"] = {"gns", "decompose", "entropy"};
  const Json levels12 = {1, 2};
  auto family = [&](const char* fam, std::initializer_list<const char*> keys) {
    doc["state"]["family"] = fam;
    for (const char* k : keys) doc["state"]["params"][k] = p.at(k);
  };

  if (name == "m2-lambda") {
    family("m2", {"lambda"});
    Json e12 = Json::array({Json::array({0.0, 1.0}), Json::array({0.0, 0.0})});
    Json e21 = Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0})});
    doc["subalgebra"]["generators"] = {e12, e21};
    doc["tasks"].push_back("entropy_modes_compare");
  } else if (name == "bell-theta") {
    family("bell", {"theta"});
    doc["subalgebra"]["named"] = "bell_local";
  } else if (name == "bell-corners") {
    family("bell", {"theta"});
    const double c = p.at("corner");
    doc["subalgebra"]["named"] = c > 0.5 ? "bell_plus" : (c < -0.5 ? "bell_minus" : "bell_plus_minus");
  } else if (name == "fermi4") {
    family("fermi4", {"theta"});
    doc["subalgebra"]["levels"] = levels12;
    doc["tasks"].push_back("entropy_modes_compare");
  } else if (name == "fermi3-choice1") {
    family("fermi3", {"theta"});
    doc["subalgebra"]["levels"] = {1, 2, 3};
  } else if (name == "fermi3-choice2") {
    family("fermi3", {"theta"});
    doc["subalgebra"]["levels"] = levels12;
  } else if (name == "bose3-surface") {
    family("bose3", {"theta", "phi"});
    doc["subalgebra"]["levels"] = levels12;
    doc["tasks"].push_back("surface");
    doc["options"]["grid"] = static_cast<Index>(std::llround(p.at("grid")));
    doc["options"]["projection"] = p.at("stereographic") > 0.5 ? "stereographic" : "raw";
  } else if (name == "qboson") {
    family("qboson", {"theta", "phi", "q"});
    doc["subalgebra"]["levels"] = levels12;
  } else if (name == "evolve-fermi3") {
    family("fermi3", {"theta"});
    doc["subalgebra"]["levels"] = levels12;
    const Index steps = std::llround(p.at("steps"));
    if (steps < 1) schema("param.steps", "must be positive");
    Json times = Json::array();
    for (Index i = 0; i <= steps; ++i) {
      times.push_back(p.at("t_max") * static_cast<double>(i) / static_cast<double>(steps));
    }
    doc["options"]["times"] = times;
    doc["tasks"].push_back("evolve");
  } else if (name == "kraus") {
    doc["state"]["family"] = "fermi3";
    doc["state"]["params"]["theta"] = p.at("from");
    doc["subalgebra"]["levels"] = levels12;
    doc["options"]["kraus_pairs"] = {{p.at("from"), p.at("to")}, {0.0, p.at("to")}};
    doc["tasks"].push_back("kraus");
  } else if (name == "parity-toy") {
    family("parity_toy", {"theta"});
    doc["subalgebra"]["named"] = "parity_commutant";
    doc["subalgebra"]["parity"] = {{1.0, 0.0}, {0.0, -1.0}};
    doc["tasks"].push_back("parity");
  } else if (name == "collapse") {
    family("bell", {"theta"});
    Json proj = Json::array();
    for (int r = 0; r < 4; ++r) {
      Json row = Json::array();
      for (int c = 0; c < 4; ++c) row.push_back(r == c && r < 2 ? 1.0 : 0.0);
      proj.push_back(row);
    }
    doc["subalgebra"]["named"] = "projector_commutant";
    doc["subalgebra"]["projector"] = proj;
    doc["tasks"].push_back("collapse");
  }
  return parse_scenario(doc, defaults);
}

}  // namespace gns
