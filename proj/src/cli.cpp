#include "kppfront/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kppfront/error.hpp"
#include "kppfront/io.hpp"
#include "kppfront/verify.hpp"

namespace kppfront {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Equilibria: return "Equilibria";
    case ScenarioKind::Classify: return "Classify";
    case ScenarioKind::Front2D: return "Front2D";
    case ScenarioKind::FrontFull: return "FrontFull";
    case ScenarioKind::PdeRun: return "PdeRun";
    case ScenarioKind::EpsSweep: return "EpsSweep";
    case ScenarioKind::DeltaSweep: return "DeltaSweep";
    case ScenarioKind::FormulaAudit: return "FormulaAudit";
    case ScenarioKind::TrappingCheck: return "TrappingCheck";
  }
  return "?";
}

const char* to_string(ModelChoice model) {
  switch (model) {
    case ModelChoice::Case1: return "case1";
    case ModelChoice::Case2: return "case2";
    case ModelChoice::HT: return "ht";
  }
  return "?";
}

const char* to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Front: return "front";
    case InitialKind::Equilibrium: return "equilibrium";
    case InitialKind::Constant: return "constant";
  }
  return "?";
}

namespace cli {

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

constexpr ScenarioKind kKinds[] = {
    ScenarioKind::Equilibria, ScenarioKind::Classify,   ScenarioKind::Front2D,
    ScenarioKind::FrontFull,  ScenarioKind::PdeRun,     ScenarioKind::EpsSweep,
    ScenarioKind::DeltaSweep, ScenarioKind::FormulaAudit, ScenarioKind::TrappingCheck,
};

constexpr SystemId kSystems[] = {
    SystemId::Case1Full4D, SystemId::Case1Reduced3D, SystemId::Case1KPP2D,
    SystemId::Case2Full4D, SystemId::Case2Slow2D,    SystemId::Case2Layer,
    SystemId::Case2SlowScalar, SystemId::HTFull4D,   SystemId::HTKPP2D,
};

using KindMask = unsigned;
constexpr KindMask bit(ScenarioKind k) { return 1u << static_cast<unsigned>(k); }
constexpr KindMask kAnyKind = (1u << 9) - 1;
constexpr KindMask kModelKinds = kAnyKind & ~bit(ScenarioKind::FormulaAudit);
constexpr KindMask kShootingKinds = bit(ScenarioKind::Front2D) | bit(ScenarioKind::FrontFull) |
                                    bit(ScenarioKind::PdeRun) | bit(ScenarioKind::EpsSweep) |
                                    bit(ScenarioKind::DeltaSweep);
constexpr KindMask kSweepKinds = bit(ScenarioKind::EpsSweep) | bit(ScenarioKind::DeltaSweep);
constexpr KindMask kPde = bit(ScenarioKind::PdeRun);

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

struct Value {
  std::string key, text;
  std::size_t line = 0;

  [[noreturn]] void bad(const std::string& expected) const {
    parse_error(line, "key '" + key + "': '" + text + "' is not " + expected);
  }

  double number() const {
    double v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) bad("a finite decimal number");
    return v;
  }

  std::uint64_t count() const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad("a nonnegative integer");
    return v;
  }

  bool boolean() const {
    const std::string t = lower(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    bad("a boolean (true/false)");
  }

  std::vector<double> list() const {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      Value v{key, trim(item), line};
      out.push_back(v.number());
    }
    if (out.empty()) bad("a comma-separated list of numbers");
    return out;
  }

  template <class E, std::size_t N>
  E choose(const E (&options)[N], const char* what) const {
    for (E e : options)
      if (lower(to_string(e)) == lower(text)) return e;
    std::string names;
    for (E e : options) names += std::string(names.empty() ? "" : ", ") + to_string(e);
    bad(std::string(what) + " (one of " + names + ")");
  }
};

struct Entry {
  Value value;
  bool used = false;
};

struct KeySpec {
  const char* name;
  KindMask kinds;
  std::function<void(Scenario&, const Value&)> apply;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = [] {
    std::vector<KeySpec> k;
    auto shooting = [&](const char* name, std::function<void(ShootingConfig&, const Value&)> f) {
      k.push_back({name, kShootingKinds, [f](Scenario& s, const Value& v) { f(s.shooting, v); }});
    };
    k.push_back({"system", bit(ScenarioKind::Classify) | bit(ScenarioKind::Front2D) | bit(ScenarioKind::FrontFull),
                 [](Scenario& s, const Value& v) { s.system = v.choose(kSystems, "a system name"); }});
    k.push_back({"point", bit(ScenarioKind::Classify), [](Scenario& s, const Value& v) { s.point = v.list(); }});

    shooting("launch_offset", [](ShootingConfig& c, const Value& v) { c.launch_offset = v.number(); });
    shooting("rel_tol", [](ShootingConfig& c, const Value& v) { c.tol.rel = v.number(); });
    shooting("abs_tol", [](ShootingConfig& c, const Value& v) { c.tol.abs = v.number(); });
    shooting("max_span", [](ShootingConfig& c, const Value& v) { c.max_span = v.number(); });
    shooting("landing_radius", [](ShootingConfig& c, const Value& v) { c.landing_radius = v.number(); });
    shooting("output_step", [](ShootingConfig& c, const Value& v) { c.output_step = v.number(); });
    shooting("require_monotone", [](ShootingConfig& c, const Value& v) { c.require_monotone = v.boolean(); });

    k.push_back({"x_min", kPde, [](Scenario& s, const Value& v) { s.grid.x_min = v.number(); }});
    k.push_back({"x_max", kPde, [](Scenario& s, const Value& v) { s.grid.x_max = v.number(); }});
    k.push_back({"n", kPde, [](Scenario& s, const Value& v) { s.grid.n = v.count(); }});
    k.push_back({"boundary", kPde, [](Scenario& s, const Value& v) {
                   const std::string t = lower(v.text);
                   if (t == "neumann") s.grid.boundary = BoundaryKind::Neumann;
                   else if (t == "dirichlet") s.grid.boundary = BoundaryKind::Dirichlet;
                   else v.bad("a boundary kind (neumann or dirichlet)");
                 }});
    k.push_back({"t_end", kPde, [](Scenario& s, const Value& v) { s.t_end = v.number(); }});
    k.push_back({"frame", kPde, [](Scenario& s, const Value& v) {
                   const std::string t = lower(v.text);
                   if (t == "lab") s.comoving = false;
                   else if (t == "comoving") s.comoving = true;
                   else v.bad("a frame (lab or comoving)");
                 }});
    k.push_back({"snapshots", kPde, [](Scenario& s, const Value& v) { s.sim.snapshots = v.count(); }});
    k.push_back({"dt_max", kPde, [](Scenario& s, const Value& v) { s.sim.dt_max = v.number(); }});
    k.push_back({"initial", kPde, [](Scenario& s, const Value& v) {
                   const InitialKind options[] = {InitialKind::Front, InitialKind::Equilibrium, InitialKind::Constant};
                   s.initial = v.choose(options, "an initial condition kind");
                 }});
    k.push_back({"equilibrium", kPde, [](Scenario& s, const Value& v) { s.equilibrium = v.text; }});
    k.push_back({"u0", kPde, [](Scenario& s, const Value& v) { s.u0 = v.number(); }});
    k.push_back({"w0", kPde, [](Scenario& s, const Value& v) { s.w0 = v.number(); }});
    k.push_back({"center", kPde, [](Scenario& s, const Value& v) { s.center = v.number(); }});
    k.push_back({"seed_system", kPde,
                 [](Scenario& s, const Value& v) { s.seed_system = v.choose(kSystems, "a system name"); }});
    k.push_back({"snapshot_stride", kPde, [](Scenario& s, const Value& v) { s.snapshot_stride = v.count(); }});
    k.push_back({"estimate_speed", kPde, [](Scenario& s, const Value& v) { s.estimate_speed = v.boolean(); }});
    k.push_back({"level", kPde, [](Scenario& s, const Value& v) { s.level = v.number(); }});
    k.push_back({"t_min", kPde, [](Scenario& s, const Value& v) { s.t_min = v.number(); }});

    k.push_back({"values", kSweepKinds, [](Scenario& s, const Value& v) { s.values = v.list(); }});
    k.push_back({"full_system", bit(ScenarioKind::DeltaSweep),
                 [](Scenario& s, const Value& v) { s.full_system = v.boolean(); }});
    k.push_back({"u1_transient", bit(ScenarioKind::DeltaSweep),
                 [](Scenario& s, const Value& v) { s.u1_transient = v.number(); }});

    const KindMask audit = bit(ScenarioKind::FormulaAudit);
    k.push_back({"samples", audit, [](Scenario& s, const Value& v) { s.samples = v.count(); }});
    k.push_back({"kpp_samples", audit, [](Scenario& s, const Value& v) { s.kpp_samples = v.count(); }});
    k.push_back({"kpp_grid", audit, [](Scenario& s, const Value& v) {
                   const auto n = v.count();
                   if (n > 1000000) v.bad("a grid size up to 1e6");
                   s.kpp_grid = static_cast<int>(n);
                 }});
    k.push_back({"method", audit, [](Scenario& s, const Value& v) {
                   const std::string t = lower(v.text);
                   if (t == "complex_step") s.method = JacobianMethod::ComplexStep;
                   else if (t == "central_difference") s.method = JacobianMethod::CentralDifference;
                   else v.bad("a Jacobian method (complex_step or central_difference)");
                 }});

    const KindMask trap = bit(ScenarioKind::TrappingCheck);
    k.push_back({"b", trap, [](Scenario& s, const Value& v) { s.b = v.number(); }});
    k.push_back({"c_factor", trap, [](Scenario& s, const Value& v) { s.c_factor = v.number(); }});
    k.push_back({"seeds", trap, [](Scenario& s, const Value& v) { s.seeds = v.count(); }});
    k.push_back({"span", trap, [](Scenario& s, const Value& v) { s.span = v.number(); }});

    k.push_back({"seed", audit | trap, [](Scenario& s, const Value& v) { s.seed = v.count(); }});
    return k;
  }();
  return specs;
}

const char* kModelKeys[] = {"model", "alpha", "eta", "beta", "gamma", "delta", "epsilon", "mu", "c"};

bool is_model_key(const std::string& key) {
  return std::find_if(std::begin(kModelKeys), std::end(kModelKeys), [&](const char* k) { return key == k; }) !=
         std::end(kModelKeys);
}

std::string suggestion(const std::string& key) {
  std::string best;
  std::size_t best_d = 3;
  auto consider = [&](const std::string& cand) {
    const std::size_t d = edit_distance(key, cand);
    if (d < best_d) {
      best_d = d;
      best = cand;
    }
  };
  consider("kind");
  for (const char* k : kModelKeys) consider(k);
  for (const auto& spec : key_specs()) consider(spec.name);
  return best.empty() ? "" : " (did you mean '" + best + "'?)";
}

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::set<std::string> names;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineno;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') parse_error(lineno, "section header must end with ']'");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) parse_error(lineno, "empty section name");
      for (char ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
          parse_error(lineno, "section name '" + name + "' may only contain letters, digits, '_' and '-'");
      if (!names.insert(name).second) parse_error(lineno, "duplicate section [" + name + "]");
      sections.push_back({name, lineno, {}});
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) parse_error(lineno, "expected 'key = value', found '" + line + "'");
      if (sections.empty()) parse_error(lineno, "key outside of any [section]");
      std::string key = trim(std::string_view(line).substr(0, eq));
      std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) parse_error(lineno, "missing key before '='");
      if (value.empty()) parse_error(lineno, "key '" + key + "' has no value");
      for (const auto& e : sections.back().entries)
        if (e.value.key == key) parse_error(lineno, "key '" + key + "' repeated in section [" + sections.back().name + "]");
      sections.back().entries.push_back({{key, value, lineno}, false});
    }
    if (end == text.size()) break;
  }
  return sections;
}

[[noreturn]] void invalid(const Scenario& s, const std::string& what) {
  fail(ErrorCode::ValidationError, "scenario '" + s.name + "': " + what);
}

SystemId default_system(const Scenario& s) {
  const bool full = s.kind == ScenarioKind::FrontFull;
  switch (s.model) {
    case ModelChoice::Case1: return full ? SystemId::Case1Full4D : SystemId::Case1KPP2D;
    case ModelChoice::Case2: return full ? SystemId::Case2Full4D : SystemId::Case2Slow2D;
    case ModelChoice::HT: return full ? SystemId::HTFull4D : SystemId::HTKPP2D;
  }
  return SystemId::Case1KPP2D;
}

SystemId default_seed_system(ModelChoice model) {
  switch (model) {
    case ModelChoice::Case1: return SystemId::Case1Full4D;
    case ModelChoice::Case2: return SystemId::Case2Slow2D;
    case ModelChoice::HT: return SystemId::HTFull4D;
  }
  return SystemId::Case1Full4D;
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

void finish(Scenario& s, const std::map<std::string, double>& raw) {
  auto get = [&](const char* key) {
    const auto it = raw.find(key);
    return it == raw.end() ? kUnset : it->second;
  };
  auto need = [&](const char* key) {
    if (!raw.count(key)) invalid(s, std::string("missing required key '") + key + "' for kind " + to_string(s.kind));
  };
  ModelParams& p = s.params;
  p.gamma = is_set(get("gamma")) ? get("gamma") : 1.0;
  p.delta = is_set(get("delta")) ? get("delta") : 0.05;
  p.epsilon = get("epsilon");
  p.c = get("c");
  // model keys are read into `raw` and assembled once the model is known
  if (s.model == ModelChoice::HT) {
    p.family = ModelFamily::HollingTanner;
    p.scaling = ScalingMode::HTSlowPrey;
    for (const char* key : {"alpha", "eta", "mu"})
      if (raw.count(key)) invalid(s, std::string("key '") + key + "' does not apply to model ht");
    p.beta = get("beta");
  } else {
    p.family = ModelFamily::RosenzweigMacArthur;
    p.scaling = s.model == ModelChoice::Case1 ? ScalingMode::Case1SlowPrey : ScalingMode::Case2VanishingDiffusion;
    if (raw.count("beta")) invalid(s, "key 'beta' applies only to model ht");
    p.alpha = get("alpha");
    p.eta = get("eta");
    if (s.model == ModelChoice::Case2) {
      if (raw.count("c")) invalid(s, "key 'c' does not apply to model case2 (the speed is scaled to 1)");
      p.mu = is_set(get("mu")) ? get("mu") : 1.0;
    } else if (raw.count("mu")) {
      invalid(s, "key 'mu' applies only to model case2");
    }
  }

  if (s.kind != ScenarioKind::FormulaAudit) {
    if (s.model == ModelChoice::HT) need("beta");
    else {
      need("alpha");
      need("eta");
    }
    try {
      validate(p);
    } catch (const Error& e) {
      invalid(s, e.message());
    }
  }

  const bool needs_speed = s.model != ModelChoice::Case2;
  switch (s.kind) {
    case ScenarioKind::Equilibria:
      break;
    case ScenarioKind::Classify:
    case ScenarioKind::Front2D:
    case ScenarioKind::FrontFull: {
      if (!s.system) s.system = default_system(s);
      if (needs_speed) need("c");
      if (s.kind == ScenarioKind::Front2D) {
        const SystemId id = *s.system;
        if (id != SystemId::Case1KPP2D && id != SystemId::HTKPP2D && id != SystemId::Case2Slow2D)
          invalid(s, std::string("Front2D needs a planar system, not ") + to_string(id));
      }
      if (s.kind == ScenarioKind::FrontFull) {
        const SystemId id = *s.system;
        if (id != SystemId::Case1Full4D && id != SystemId::Case1Reduced3D && id != SystemId::Case2Full4D &&
            id != SystemId::HTFull4D)
          invalid(s, std::string("FrontFull needs a 3-D or 4-D system, not ") + to_string(id));
      }
      try {
        const PhaseSystem sys(*s.system, p);
        if (s.point && s.point->size() != sys.dim())
          invalid(s, "point has " + std::to_string(s.point->size()) + " entries but " + to_string(*s.system) +
                         " has dimension " + std::to_string(sys.dim()));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ValidationError && e.message().rfind("scenario '", 0) == 0) throw;
        invalid(s, e.message());
      }
      break;
    }
    case ScenarioKind::PdeRun: {
      if (needs_speed) need("c");
      need("epsilon");
      try {
        s.grid.validate();
      } catch (const Error& e) {
        invalid(s, e.message());
      }
      if (!(s.t_end > 0)) invalid(s, "t_end must satisfy t_end > 0");
      if (s.sim.snapshots < 5 && s.estimate_speed) invalid(s, "speed estimation needs snapshots >= 5");
      if (s.sim.snapshots < 2) invalid(s, "snapshots must satisfy snapshots >= 2");
      if (s.snapshot_stride < 1) invalid(s, "snapshot_stride must satisfy snapshot_stride >= 1");
      if (!(s.sim.dt_max > 0)) invalid(s, "dt_max must satisfy dt_max > 0");
      if (s.initial == InitialKind::Constant && (!is_set(s.u0) || !is_set(s.w0)))
        invalid(s, "initial = constant needs u0 and w0");
      if (s.initial != InitialKind::Constant && (is_set(s.u0) || is_set(s.w0)))
        invalid(s, "u0 and w0 apply only to initial = constant");
      if (!s.seed_system) s.seed_system = default_seed_system(s.model);
      try {
        PhaseSystem(*s.seed_system, p);
      } catch (const Error& e) {
        invalid(s, "seed_system: " + e.message());
      }
      break;
    }
    case ScenarioKind::EpsSweep:
    case ScenarioKind::DeltaSweep: {
      need("values");
      if (s.kind == ScenarioKind::EpsSweep && s.model != ModelChoice::Case1) invalid(s, "EpsSweep needs model case1");
      if (s.kind == ScenarioKind::EpsSweep) need("delta");
      if (s.kind == ScenarioKind::DeltaSweep && raw.count("delta"))
        invalid(s, "DeltaSweep takes its delta values from 'values', not 'delta'");
      if (s.model == ModelChoice::HT) invalid(s, "sweeps support models case1 and case2");
      if (needs_speed) need("c");
      if (s.values.size() < 3) invalid(s, "values needs at least 3 entries for a slope fit");
      if (!decreasing(s.values)) invalid(s, "values must be strictly decreasing");
      break;
    }
    case ScenarioKind::FormulaAudit:
      if (s.samples == 0) invalid(s, "samples must satisfy samples >= 1");
      if (s.kpp_grid < 3) invalid(s, "kpp_grid must satisfy kpp_grid >= 3");
      break;
    case ScenarioKind::TrappingCheck:
      if (s.model != ModelChoice::Case1) invalid(s, "TrappingCheck needs model case1");
      if (raw.count("c") == (s.c_factor ? 1u : 0u)) invalid(s, "TrappingCheck needs exactly one of c and c_factor");
      if (s.c_factor && !(*s.c_factor >= 1)) invalid(s, "c_factor must satisfy c_factor >= 1");
      if (!(s.span > 0)) invalid(s, "span must satisfy span > 0");
      if (s.seeds == 0) invalid(s, "seeds must satisfy seeds >= 1");
      break;
  }
}

Scenario build(Section& sec) {
  Scenario s;
  s.name = sec.name;
  s.line = sec.line;
  auto kind_it = std::find_if(sec.entries.begin(), sec.entries.end(), [](const Entry& e) { return e.value.key == "kind"; });
  if (kind_it == sec.entries.end())
    parse_error(sec.line, "section [" + sec.name + "] has no 'kind' key");
  s.kind = kind_it->value.choose(kKinds, "a scenario kind");
  kind_it->used = true;
  if (s.kind == ScenarioKind::Front2D) s.shooting.require_monotone = true;

  std::map<std::string, double> raw;
  for (auto& e : sec.entries) {
    if (e.used) continue;
    const Value& v = e.value;
    if (is_model_key(v.key)) {
      if (!(kModelKinds & bit(s.kind)))
        parse_error(v.line, "key '" + v.key + "' does not apply to kind " + to_string(s.kind));
      if (v.key == "model") {
        const ModelChoice options[] = {ModelChoice::Case1, ModelChoice::Case2, ModelChoice::HT};
        s.model = v.choose(options, "a model");
      } else {
        raw[v.key] = v.number();
      }
      continue;
    }
    const auto& specs = key_specs();
    const auto spec = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& k) { return v.key == k.name; });
    if (spec == specs.end())
      parse_error(v.line, "unknown key '" + v.key + "' in section [" + sec.name + "]" + suggestion(v.key));
    if (!(spec->kinds & bit(s.kind)))
      parse_error(v.line, "key '" + v.key + "' does not apply to kind " + to_string(s.kind));
    spec->apply(s, v);
    if (v.key == "values") raw["values"] = 0.0;  // presence marker for need()
  }
  finish(s, raw);
  return s;
}

// ---------------------------------------------------------------------------
// execution

namespace fs = std::filesystem;

struct Writer {
  fs::path dir;
  const RunOptions& opt;

  bool csv() const { return opt.format != OutputFormat::Json; }
  bool json() const { return opt.format != OutputFormat::Csv; }

  void table(const std::string& stem, const std::function<void(std::ostream&, char)>& emit) const {
    if (csv()) {
      std::ostringstream os;
      emit(os, ',');
      io::write_file(dir / (stem + ".csv"), os.str());
    }
    if (opt.plot_data) {
      std::ostringstream os;
      emit(os, ' ');
      io::write_file(dir / (stem + ".dat"), os.str());
    }
  }
  void data(const Json& j) const {
    if (json()) io::write_file(dir / "data.json", io::dump_json(j));
  }
};

std::string sci(double v, int digits = 2) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

Json profile_meta(const FrontProfile& p) {
  Json j = io::to_json(p);
  j.erase("data");
  return j;
}

std::string front_summary(const FrontProfile& p) {
  return "captured, residuals " + sci(p.convergence_residuals.first) + "/" + sci(p.convergence_residuals.second) +
         (p.monotone ? ", monotone" : ", non-monotone") + (p.positive ? "" : ", not positive");
}

std::string run_kind(const Scenario& s, const RunOptions& opt, const Writer& out, Json& result) {
  const std::uint64_t seed = s.seed.value_or(opt.seed);
  switch (s.kind) {
    case ScenarioKind::Equilibria: {
      const auto eqs = models::equilibria(s.params);
      Json list = Json::array();
      for (const auto& e : eqs) list.push_back(io::to_json(e));
      result["equilibria"] = list;
      out.table("equilibria", [&](std::ostream& os, char d) {
        os << (d == ',' ? "" : "# ") << "name" << d << "u" << d << "w" << d << "kind\n";
        for (const auto& e : eqs)
          os << e.name << d << io::format_double(e.state[0]) << d << io::format_double(e.state[1]) << d
             << to_string(e.kind) << '\n';
      });
      std::string line = std::to_string(eqs.size()) + " equilibria:";
      for (const auto& e : eqs) line += " " + e.name + "=" + to_string(e.kind);
      return line;
    }
    case ScenarioKind::Classify: {
      const PhaseSystem sys(*s.system, s.params);
      std::vector<std::pair<std::string, State>> points;
      if (s.point) {
        points.emplace_back("point", *s.point);
      } else {
        const auto [left, right] = sys.front_endpoints();
        const auto [left_name, right_name] = frontsolver::endpoint_names(*s.system);
        points.emplace_back(left_name, left);
        points.emplace_back(right_name, right);
      }
      Json list = Json::array();
      std::string line = to_string(*s.system) + std::string(":");
      std::vector<Equilibrium> eqs;
      for (const auto& [label, x] : points) {
        Equilibrium e = phasespace::classify(sys, x);
        e.name = label;
        line += " " + e.name + "=" + to_string(e.kind);
        list.push_back(io::to_json(e));
        eqs.push_back(std::move(e));
      }
      result["system"] = to_string(*s.system);
      result["components"] = sys.component_names();
      result["equilibria"] = list;
      out.table("classification", [&](std::ostream& os, char d) {
        os << (d == ',' ? "" : "# ") << "name";
        for (const auto& n : sys.component_names()) os << d << n;
        os << d << "kind\n";
        for (const auto& e : eqs) {
          os << e.name;
          for (double v : e.state) os << d << io::format_double(v);
          os << d << to_string(e.kind) << '\n';
        }
      });
      return line;
    }
    case ScenarioKind::Front2D:
    case ScenarioKind::FrontFull: {
      const PhaseSystem sys(*s.system, s.params);
      const FrontProfile p = s.kind == ScenarioKind::Front2D ? frontsolver::shoot_front_2d(sys, s.shooting)
                                                             : frontsolver::shoot_front_full(sys, s.shooting);
      result["shooting"] = io::to_json(s.shooting);
      result["front"] = profile_meta(p);
      if (*s.system == SystemId::Case1Full4D) {
        const auto adh = frontsolver::slow_manifold_adherence(p, s.params, 0.0);
        result["slow_manifold_adherence"] = {{"max_residual", adh.max_residual}, {"constant", adh.constant}};
      }
      out.table("profile", [&](std::ostream& os, char d) { io::write_profile_csv(os, p, d); });
      out.data(io::to_json(p)["data"]);
      return front_summary(p);
    }
    case ScenarioKind::PdeRun: {
      const Grid1D& grid = s.grid;
      const double c = s.model == ModelChoice::Case2 ? 1.0 : s.params.c;
      std::vector<double> u0, w0;
      std::optional<FrontProfile> seed_front;
      double level = s.level.value_or(kUnset);
      switch (s.initial) {
        case InitialKind::Front: {
          const PhaseSystem sys(*s.seed_system, s.params);
          const bool planar = sys.dim() == 2;
          seed_front = planar ? frontsolver::shoot_front_2d(sys, s.shooting) : frontsolver::shoot_front_full(sys, s.shooting);
          require(seed_front->find_component("w1").has_value(), ErrorCode::InvalidArgument,
                  "seed_system must have a w1 component");
          const double center = s.center.value_or(grid.x_min + 0.3 * (grid.x_max - grid.x_min));
          std::tie(u0, w0) = pdesim::profile_to_ic(*seed_front, grid, center);
          if (!is_set(level)) level = 0.5 * (w0.front() + w0.back());
          result["seed_front"] = profile_meta(*seed_front);
          result["center"] = center;
          break;
        }
        case InitialKind::Equilibrium: {
          const auto eqs = models::equilibria(s.params);
          const auto it = std::find_if(eqs.begin(), eqs.end(), [&](const Equilibrium& e) { return e.name == s.equilibrium; });
          if (it == eqs.end()) fail(ErrorCode::InvalidArgument, "no equilibrium named '" + s.equilibrium + "'");
          u0.assign(grid.n, it->state[0]);
          w0.assign(grid.n, it->state[1]);
          result["equilibrium"] = io::to_json(*it);
          break;
        }
        case InitialKind::Constant:
          u0.assign(grid.n, s.u0);
          w0.assign(grid.n, s.w0);
          break;
      }
      Grid1D g = grid;
      if (g.boundary == BoundaryKind::Dirichlet) {
        g.left_state = {u0.front(), w0.front()};
        g.right_state = {u0.back(), w0.back()};
      }
      const Frame frame = s.comoving ? Frame::comoving(c) : Frame::lab();
      const SpaceTimeField f = pdesim::simulate(s.params, g, u0, w0, s.t_end, frame, s.sim);
      double change = 0.0;
      for (std::size_t i = 0; i < g.n; ++i)
        change = std::max({change, std::abs(f.u.back()[i] - f.u.front()[i]), std::abs(f.w.back()[i] - f.w.front()[i])});
      result["initial"] = to_string(s.initial);
      result["manifest"] = io::manifest_json(f);
      result["max_change"] = change;
      std::string line = "dt " + sci(f.dt) + ", " + std::to_string(f.steps) + " steps, max change " + sci(change);
      if (s.estimate_speed) {
        if (!is_set(level)) level = 0.5 * (*std::max_element(w0.begin(), w0.end()) + *std::min_element(w0.begin(), w0.end()));
        const SpeedEstimate est = pdesim::estimate_front_speed(f, 1, level, s.t_min);
        const double expected = s.comoving ? 0.0 : c;
        result["speed"] = {{"component", "w"},  {"level", level},       {"t_min", s.t_min},
                           {"c_est", est.c},    {"r2", est.r2},          {"expected", expected},
                           {"times", est.times}, {"positions", est.positions}};
        if (!s.comoving) result["speed"]["relative_error"] = std::abs(est.c - c) / c;
        out.table("speed", [&](std::ostream& os, char d) {
          os << (d == ',' ? "" : "# ") << "t" << d << "position\n";
          for (std::size_t k = 0; k < est.times.size(); ++k)
            os << io::format_double(est.times[k]) << d << io::format_double(est.positions[k]) << '\n';
        });
        line = "c_est " + fixed(est.c, 6) + " (r2 " + fixed(est.r2, 7) + "), " + line;
      }
      Json snaps = Json::array();
      if (out.csv() || opt.plot_data) fs::create_directories(out.dir / "snapshots");
      for (std::size_t k = 0; k < f.times.size(); k += s.snapshot_stride) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "snapshots/snapshot_%03zu", k);
        out.table(stem, [&](std::ostream& os, char d) { io::write_snapshot_csv(os, f, k, d); });
        snaps.push_back({{"index", k}, {"t", f.times[k]}, {"u", f.u[k]}, {"w", f.w[k]}});
      }
      out.data({{"x_min", g.x_min}, {"x_max", g.x_max}, {"n", g.n}, {"snapshots", snaps}});
      return line;
    }
    case ScenarioKind::EpsSweep:
    case ScenarioKind::DeltaSweep: {
      SweepOptions so;
      so.shooting = s.shooting;
      so.jobs = std::max(1u, opt.jobs);
      so.full_system = s.full_system;
      so.u1_transient = s.u1_transient;
      if (is_set(s.params.mu)) so.mu = s.params.mu;
      const ModelParams& p = s.params;
      SweepResult r;
      if (s.kind == ScenarioKind::EpsSweep) r = verify::epsilon_sweep_case1(p.alpha, p.eta, p.c, p.delta, s.values, so);
      else if (s.model == ModelChoice::Case1) r = verify::delta_sweep_case1(p.alpha, p.eta, p.c, s.values, so);
      else r = verify::delta_sweep_case2(p.alpha, p.eta, s.values, so);
      result["sweep"] = io::to_json(r);
      out.table("sweep", [&](std::ostream& os, char d) { io::write_sweep_csv(os, r, d); });
      if (opt.plot_data) {
        std::ostringstream os;
        os << "# log_" << r.parameter << " log_sup_distance\n";
        for (const auto& pt : r.points)
          if (pt.captured) os << io::format_double(std::log(pt.value)) << ' ' << io::format_double(std::log(pt.sup_distance)) << '\n';
        io::write_file(out.dir / "loglog.dat", os.str());
      }
      out.data(io::to_json(r)["points"]);
      std::string line = "slope " + fixed(r.slope, 4) + ", r2 " + fixed(r.r2, 6) + ", " + std::to_string(r.captured) +
                         "/" + std::to_string(r.points.size()) + " captured" +
                         (r.monotone ? ", decreasing" : ", NOT decreasing") + (r.inversion_flagged ? " (flagged inversion)" : "");
      return line;
    }
    case ScenarioKind::FormulaAudit: {
      const auto samples = verify::random_audit_samples(s.samples, seed);
      const auto report = verify::formula_audit(samples, s.method);
      const auto kpp = verify::kpp_audit(s.kpp_samples, seed, s.kpp_grid);
      std::size_t kpp_failed = 0;
      Json kj = Json::array();
      for (const auto& e : kpp) {
        Json q = io::to_json(e.params);
        q["passed"] = e.report.all_passed();
        q["root"] = e.report.root;
        Json checks = Json::array();
        for (const auto& ch : e.report.checks)
          checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"value", ch.value}, {"margin", ch.margin}});
        q["checks"] = checks;
        kj.push_back(q);
        if (!e.report.all_passed()) ++kpp_failed;
      }
      result["seed"] = seed;
      result["method"] = s.method == JacobianMethod::ComplexStep ? "complex_step" : "central_difference";
      result["formula_audit"] = io::to_json(report);
      result["kpp_audit"] = {{"samples", kpp.size()}, {"failed", kpp_failed}, {"entries", kj}};
      out.table("audit", [&](std::ostream& os, char d) {
        os << (d == ',' ? "" : "# ") << "alpha" << d << "eta" << d << "delta" << d << "c" << d << "eig_error" << d
           << "delta0_error" << d << "kpp_margin" << d << "flagged" << d << "passed\n";
        for (const auto& e : report.entries)
          os << io::format_double(e.sample.alpha) << d << io::format_double(e.sample.eta) << d
             << io::format_double(e.sample.delta) << d << io::format_double(e.sample.c) << d
             << io::format_double(e.eig_error) << d << io::format_double(e.delta0_error) << d
             << io::format_double(e.kpp_margin) << d << (e.flagged ? 1 : 0) << d << (e.passed ? 1 : 0) << '\n';
      });
      if (!report.all_passed() || kpp_failed > 0)
        fail(ErrorCode::ValidationError, std::to_string(report.failed) + " formula and " + std::to_string(kpp_failed) +
                                             " KPP audit failures");
      return std::to_string(report.entries.size()) + " samples, worst eigenvalue error " + sci(report.worst_eig_error) +
             ", " + std::to_string(report.flagged) + " flagged; " + std::to_string(kpp.size()) + " KPP checks passed";
    }
    case ScenarioKind::TrappingCheck: {
      const ModelParams& p = s.params;
      const double c = s.c_factor ? *s.c_factor * phasespace::critical_speed(p.family, p) : p.c;
      const auto r = verify::trapping_check(p.alpha, p.eta, c, s.b, s.seeds, s.span, seed);
      result["seed"] = seed;
      result["c"] = c;
      result["trapping"] = io::to_json(r);
      out.table("triangle", [&](std::ostream& os, char d) {
        os << (d == ',' ? "" : "# ") << "w1" << d << "w2\n";
        for (std::size_t k = 0; k <= 3; ++k) {
          const auto& v = r.triangle.vertices[k % 3];
          os << io::format_double(v[0]) << d << io::format_double(v[1]) << '\n';
        }
      });
      if (!r.passed()) fail(ErrorCode::ValidationError, std::to_string(r.exits) + " trajectories left the triangle");
      return std::to_string(r.seeds) + " seeds, c " + fixed(c, 6) + ", max penetration " + sci(r.max_penetration) +
             ", 0 exits";
    }
  }
  return {};
}

Json scenario_header(const Scenario& s) {
  Json j;
  j["schema_version"] = "1";
  j["scenario"] = s.name;
  j["kind"] = to_string(s.kind);
  if (s.kind != ScenarioKind::FormulaAudit) {
    j["model"] = to_string(s.model);
    j["params"] = io::to_json(s.params);
  }
  if (s.system) j["system"] = to_string(*s.system);
  return j;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::vector<Scenario> parse_config(std::string_view text) {
  auto sections = split_sections(text);
  if (sections.empty()) fail(ErrorCode::ParseError, "configuration contains no [section]");
  std::vector<Scenario> out;
  out.reserve(sections.size());
  for (auto& sec : sections) out.push_back(build(sec));
  return out;
}

ScenarioOutcome run_scenario(const Scenario& s, const RunOptions& opt) {
  ScenarioOutcome o;
  o.name = s.name;
  o.kind = s.kind;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = opt.out / s.name;
  Json result = scenario_header(s);
  Json body;
  try {
    fs::create_directories(dir);
    const Writer w{dir, opt};
    o.summary = run_kind(s, opt, w, body);
    o.ok = true;
  } catch (const Error& e) {
    o.error_code = to_string(e.code());
    o.summary = o.error_code + ": " + e.message();
  } catch (const std::exception& e) {
    o.error_code = "InternalError";
    o.summary = o.error_code + ": " + e.what();
  }
  result["status"] = o.ok ? "ok" : "failed";
  if (!o.ok) result["error"] = {{"code", o.error_code}, {"message", o.summary.substr(o.error_code.size() + 2)}};
  result["summary"] = o.summary;
  result["result"] = body;
  try {
    io::write_file(dir / "result.json", io::dump_json(result));
  } catch (const Error& e) {
    o.ok = false;
    o.error_code = to_string(e.code());
    o.summary = o.error_code + ": " + e.message();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

int run(const std::vector<Scenario>& scenarios, const RunOptions& opt, std::ostream& summary) {
  fs::create_directories(opt.out);
  std::ofstream log(opt.out / "run.log", std::ios::app);
  std::mutex log_mutex;
  auto note = [&](const std::string& line) {
    std::lock_guard<std::mutex> lock(log_mutex);
    log << timestamp() << ' ' << line << '\n';
    log.flush();
  };
  note("run start: " + std::to_string(scenarios.size()) + " scenarios, jobs " + std::to_string(opt.jobs) + ", seed " +
       std::to_string(opt.seed));

  std::vector<ScenarioOutcome> outcomes(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      note("start " + scenarios[i].name);
      outcomes[i] = run_scenario(scenarios[i], opt);
      note("end " + scenarios[i].name + " " + (outcomes[i].ok ? "ok" : "failed") + " after " +
           fixed(outcomes[i].seconds, 3) + " s");
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  std::size_t width = 0;
  for (const auto& s : scenarios) width = std::max(width, s.name.size());
  for (const auto& o : outcomes) {
    if (!o.ok) ++failed;
    summary << std::left << std::setw(static_cast<int>(width)) << o.name << "  " << std::setw(14) << to_string(o.kind)
            << (o.ok ? "ok      " : "FAILED  ") << o.summary << "  [" << fixed(o.seconds, 2) << " s]\n";
  }
  summary << outcomes.size() - failed << "/" << outcomes.size() << " scenarios succeeded\n";
  note("run end: " + std::to_string(failed) + " failed");
  return failed == 0 ? 0 : 1;
}

fs::path default_output_root() {
  if (const char* env = std::getenv("KPPFRONT_OUT"); env && *env) return env;
  return "kppfront_out";
}

}  // namespace cli
}  // namespace kppfront
