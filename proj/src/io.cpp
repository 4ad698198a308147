#include "kppfront/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kppfront/error.hpp"

namespace kppfront::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump_scalar(std::string& out, const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    std::string s = format_double(v);
    // keep floats recognisable as floats after a round trip
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    out += s;
  } else {
    out += j.dump();
  }
}

void dump(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(key).dump();
      out += ": ";
      dump(out, value, depth + 1);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& v : j) flat = flat && is_scalar(v);
    if (j.empty()) {
      out += "[]";
    } else if (flat) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        dump_scalar(out, j[i]);
      }
      out += "]";
    } else {
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(out, j[i], depth + 1);
      }
      out += "\n" + close + "]";
    }
  } else {
    dump_scalar(out, j);
  }
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

Json to_json(const ModelParams& p) {
  Json j;
  j["family"] = to_string(p.family);
  j["scaling"] = to_string(p.scaling);
  auto put = [&](const char* key, double v) {
    if (is_set(v)) j[key] = v;
  };
  put("alpha", p.alpha);
  put("gamma", p.gamma);
  put("eta", p.eta);
  put("beta", p.beta);
  put("delta", p.delta);
  put("epsilon", p.epsilon);
  put("mu", p.mu);
  put("c", p.c);
  return j;
}

Json to_json(const Equilibrium& e) {
  Json j;
  j["name"] = e.name;
  j["state"] = e.state;
  j["kind"] = to_string(e.kind);
  Json ev = Json::array();
  for (Complex z : e.eigenvalues) ev.push_back(complex_pair(z));
  j["eigenvalues"] = ev;
  return j;
}

Json to_json(const ShootingConfig& cfg) {
  Json j;
  j["launch_offset"] = cfg.launch_offset;
  j["rel_tol"] = cfg.tol.rel;
  j["abs_tol"] = cfg.tol.abs;
  j["max_span"] = cfg.max_span;
  j["landing_radius"] = cfg.landing_radius;
  j["output_step"] = cfg.output_step;
  j["require_monotone"] = cfg.require_monotone;
  return j;
}

Json to_json(const FrontProfile& p) {
  Json j;
  j["system"] = to_string(p.model_id);
  j["c"] = p.c;
  j["components"] = p.names;
  j["samples"] = p.size();
  if (!p.zeta.empty()) j["zeta_range"] = Json::array({p.zeta.front(), p.zeta.back()});
  j["left_equilibrium"] = to_json(p.left_eq);
  j["right_equilibrium"] = to_json(p.right_eq);
  j["residuals"] = Json::array({p.convergence_residuals.first, p.convergence_residuals.second});
  j["monotone"] = p.monotone;
  j["positive"] = p.positive;
  j["launch_sign"] = p.launch_sign;
  j["tracking_windows"] = p.restarts;
  j["max_jump"] = p.max_jump;
  Json data;
  data["zeta"] = p.zeta;
  for (std::size_t i = 0; i < p.dim(); ++i) data[p.names[i]] = p.column(i);
  j["data"] = data;
  return j;
}

Json to_json(const SweepResult& r) {
  Json j;
  j["parameter"] = r.parameter;
  j["comparison"] = r.comparison;
  j["reference_residual"] = r.reference_residual;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r2"] = r.r2;
  j["captured"] = r.captured;
  j["monotone"] = r.monotone;
  j["inversions"] = r.inversions;
  j["inversion_flagged"] = r.inversion_flagged;
  Json pts = Json::array();
  for (const auto& pt : r.points) {
    Json q;
    q[r.parameter] = pt.value;
    if (is_set(pt.epsilon) && r.parameter != "epsilon") q["epsilon"] = pt.epsilon;
    q["captured"] = pt.captured;
    q["sup_distance"] = pt.sup_distance;
    q["shift"] = pt.shift;
    q["residual"] = pt.residual;
    if (is_set(pt.u1_residual)) q["u1_residual"] = pt.u1_residual;
    if (!pt.error.empty()) q["error"] = pt.error;
    pts.push_back(q);
  }
  j["points"] = pts;
  return j;
}

Json to_json(const verify::AuditReport& r) {
  Json j;
  j["samples"] = r.entries.size();
  j["tolerance"] = r.tolerance;
  j["worst_eig_error"] = r.worst_eig_error;
  j["worst_delta0_error"] = r.worst_delta0_error;
  j["worst_kpp_margin"] = r.worst_kpp_margin;
  j["flagged"] = r.flagged;
  j["failed"] = r.failed;
  j["passed"] = r.all_passed();
  Json es = Json::array();
  for (const auto& e : r.entries) {
    Json q;
    q["alpha"] = e.sample.alpha;
    q["eta"] = e.sample.eta;
    q["delta"] = e.sample.delta;
    q["c"] = e.sample.c;
    q["eig_error"] = e.eig_error;
    q["worst_formula"] = e.worst_formula;
    q["kpp_passed"] = e.kpp_passed;
    q["kpp_margin"] = e.kpp_margin;
    q["delta0_error"] = e.delta0_error;
    q["flagged"] = e.flagged;
    if (e.flagged) q["flag_reason"] = e.flag_reason;
    q["passed"] = e.passed;
    es.push_back(q);
  }
  j["entries"] = es;
  return j;
}

Json to_json(const verify::TrappingReport& r) {
  Json j;
  Json v = Json::array();
  for (const auto& p : r.triangle.vertices) v.push_back(Json::array({p[0], p[1]}));
  j["vertices"] = v;
  j["min_inward_flux"] = r.triangle.min_inward_flux;
  j["b"] = r.triangle.b;
  j["seeds"] = r.seeds;
  j["span"] = r.span;
  j["tolerance"] = r.tolerance;
  j["max_penetration"] = r.max_penetration;
  j["exits"] = r.exits;
  j["passed"] = r.passed();
  return j;
}

Json manifest_json(const SpaceTimeField& f) {
  Json j;
  j["params"] = to_json(f.params);
  Json g;
  g["x_min"] = f.grid.x_min;
  g["x_max"] = f.grid.x_max;
  g["n"] = f.grid.n;
  g["dx"] = f.grid.dx();
  g["boundary"] = f.grid.boundary == BoundaryKind::Neumann ? "Neumann" : "Dirichlet";
  j["grid"] = g;
  Json fr;
  fr["kind"] = to_string(f.frame.kind);
  fr["c"] = f.frame.c;
  j["frame"] = fr;
  j["dt"] = f.dt;
  j["steps"] = f.steps;
  j["min_u"] = f.min_u;
  j["min_w"] = f.min_w;
  j["times"] = f.times;
  return j;
}

namespace {

void header(std::ostream& os, char delim, const std::vector<std::string>& cols) {
  if (delim != ',') os << "# ";
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? std::string(1, delim) : "") << cols[i];
  os << '\n';
}

}  // namespace

void write_profile_csv(std::ostream& os, const FrontProfile& p, char delim) {
  std::vector<std::string> cols{"zeta"};
  cols.insert(cols.end(), p.names.begin(), p.names.end());
  header(os, delim, cols);
  for (std::size_t k = 0; k < p.size(); ++k) {
    os << format_double(p.zeta[k]);
    for (double v : p.states[k]) os << delim << format_double(v);
    os << '\n';
  }
}

FrontProfile read_profile_csv(std::istream& is) {
  FrontProfile p;
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(is, line)) fail(ErrorCode::ParseError, "profile CSV is empty");
  ++lineno;
  auto cols = split(line);
  if (cols.size() < 2 || cols[0] != "zeta") fail(ErrorCode::ParseError, "profile CSV header must start with zeta");
  p.names.assign(cols.begin() + 1, cols.end());
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != cols.size())
      fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) +
                                      " columns, found " + std::to_string(cells.size()));
    State s(p.names.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cells[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[i].size() || cells[i].empty())
        fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": '" + cells[i] + "' is not a number");
      if (i == 0) p.zeta.push_back(v);
      else s[i - 1] = v;
    }
    p.states.push_back(std::move(s));
  }
  if (p.states.empty()) fail(ErrorCode::ParseError, "profile CSV has no rows");
  p.left_eq.state = p.states.front();
  p.right_eq.state = p.states.back();
  return p;
}

void write_snapshot_csv(std::ostream& os, const SpaceTimeField& f, std::size_t k, char delim) {
  require(k < f.times.size(), ErrorCode::InvalidArgument, "snapshot index out of range");
  header(os, delim, {"x", "u", "w"});
  for (std::size_t i = 0; i < f.grid.n; ++i)
    os << format_double(f.grid.x(i)) << delim << format_double(f.u[k][i]) << delim << format_double(f.w[k][i])
       << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, char delim) {
  header(os, delim, {r.parameter, "sup_distance", "captured", "residual"});
  for (const auto& pt : r.points)
    os << format_double(pt.value) << delim << format_double(pt.sup_distance) << delim << (pt.captured ? 1 : 0)
       << delim << format_double(pt.residual) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) fail(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace kppfront::io
