#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qflat/contour.hpp"
#include "qflat/dirac.hpp"
#include "qflat/fourier.hpp"
#include "qflat/interacting.hpp"
#include "qflat/reduce.hpp"
#include "qflat/reference.hpp"
#include "qflat/scalar.hpp"

namespace qflat::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string M = "2,4,8";
  std::string N;
  double mass = 1.0;
  double mass_dirac = 1.0;
  double coupling_l = 1.0;
  std::string x = "1,0,0,0";
  std::string points = "0,0,0,0;0.5,0.3,0,0";
  std::string signs = "-,+";
  std::string spinors;
  std::string eps;
  std::string out;
  std::string format = "csv";
  int threads = 0;
  std::optional<double> threshold;
  std::string config;
  std::string mode = "schwinger";
  std::string kernel = "scalar";
  int nodes = 64;
  std::optional<double> tf_sigma;  // unset: default_test_function
  std::string tf_center;
  double perturb = 0.0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) parts.push_back(cur.substr(b, e - b + 1));
  }
  return parts;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " entry '" + p + "'");
    }
  }
  return v;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> v;
  for (double d : parse_doubles(s, what)) {
    if (d != std::floor(d)) throw UsageError(std::string(what) + " entries must be integers");
    v.push_back(static_cast<int>(d));
  }
  return v;
}

Vec4 parse_vec4(const std::string& s, const char* what) {
  const auto v = parse_doubles(s, what);
  if (v.size() != 4) throw UsageError(std::string(what) + " needs 4 comma-separated components");
  return {v[0], v[1], v[2], v[3]};
}

std::string join(const json& j, char sep) {
  if (!j.is_array()) return j.is_string() ? j.get<std::string>() : j.dump();
  std::string s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) s += sep;
    s += j[i].is_array() ? join(j[i], ',') : (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
  }
  return s;
}

// Keys of the JSON config override the corresponding flags.
void apply_config(Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw UsageError("cannot open config file " + o.config);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "M") o.M = join(v, ',');
      else if (k == "N") o.N = join(v, ',');
      else if (k == "mass") o.mass = v.get<double>();
      else if (k == "mass_dirac") o.mass_dirac = v.get<double>();
      else if (k == "coupling_l") o.coupling_l = v.get<double>();
      else if (k == "x") o.x = join(v, ',');
      else if (k == "points") o.points = join(v, ';');
      else if (k == "signs") o.signs = join(v, ',');
      else if (k == "spinors") o.spinors = join(v, ',');
      else if (k == "eps") o.eps = join(v, ',');
      else if (k == "format") o.format = v.get<std::string>();
      else if (k == "threads") o.threads = v.get<int>();
      else if (k == "threshold") o.threshold = v.get<double>();
      else if (k == "mode") o.mode = v.get<std::string>();
      else if (k == "kernel") o.kernel = v.get<std::string>();
      else if (k == "nodes") o.nodes = v.get<int>();
      else if (k == "tf_sigma") o.tf_sigma = v.get<double>();
      else if (k == "tf_center") o.tf_center = join(v, ',');
      else if (k == "out") o.out = v.get<std::string>();
      else throw UsageError("unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config value has the wrong type: ") + e.what());
  }
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  Table table;
  json extra = json::object();
  bool pass = true;
};

json cell(const std::string& s) {
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (!s.empty() && end && *end == '\0') return d;
  if (s == "true") return true;
  if (s == "false") return false;
  return s;
}

void emit(const Report& r, const Options& o, std::ostream& out) {
  std::ostringstream os;
  if (o.format == "json") {
    json j;
    j["command"] = r.command;
    j["pass"] = r.pass;
    j["columns"] = r.table.header;
    json rows = json::array();
    for (const auto& row : r.table.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.header[i]] = cell(row[i]);
      rows.push_back(obj);
    }
    j["rows"] = rows;
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
    os << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < r.table.header.size(); ++i) os << (i ? "," : "") << r.table.header[i];
    os << "\n";
    for (const auto& row : r.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
  }
  if (o.out.empty()) {
    out << os.str();
  } else {
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write " + o.out);
    f << os.str();
  }
}

const std::vector<std::string> kConvergeHeader = {"M",         "N",          "x0",          "x1",
                                                  "x2",        "x3",         "lattice_re",  "lattice_im",
                                                  "continuum_re", "continuum_im", "abs_err", "rel_err"};

bool decreasing_below(const std::vector<double>& errs, double threshold) {
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (!(errs[i] < errs[i - 1])) return false;
  }
  return !errs.empty() && errs.back() < threshold;
}

std::vector<int> n_list(const Options& o) { return o.N.empty() ? std::vector<int>{} : parse_ints(o.N, "N"); }

Report converge_scalar_cmd(const Options& o) {
  Report r{"converge-scalar", {kConvergeHeader, {}}};
  const auto samples = converge_scalar(o.mass, parse_vec4(o.x, "x"), parse_ints(o.M, "M"), n_list(o));
  std::vector<double> errs;
  for (const auto& s : samples) {
    r.table.rows.push_back({std::to_string(s.M), std::to_string(s.N), fmt(s.x[0]), fmt(s.x[1]), fmt(s.x[2]),
                            fmt(s.x[3]), fmt(s.lattice.real()), fmt(s.lattice.imag()), fmt(s.continuum.real()),
                            fmt(s.continuum.imag()), fmt(s.abs_err), fmt(s.rel_err)});
    errs.push_back(s.rel_err);
  }
  r.pass = decreasing_below(errs, o.threshold.value_or(0.05));
  return r;
}

// One row per lattice: spinor entry (0,0) in the value columns, max-entry errors.
Report converge_dirac_cmd(const Options& o) {
  Report r{"converge-dirac", {kConvergeHeader, {}}};
  const auto samples = converge_dirac(o.mass_dirac, parse_vec4(o.x, "x"), parse_ints(o.M, "M"), n_list(o));
  std::vector<double> errs;
  json matrices = json::array();
  for (const auto& s : samples) {
    r.table.rows.push_back({std::to_string(s.M), std::to_string(s.N), fmt(s.x[0]), fmt(s.x[1]), fmt(s.x[2]),
                            fmt(s.x[3]), fmt(s.lattice(0, 0).real()), fmt(s.lattice(0, 0).imag()),
                            fmt(s.continuum(0, 0).real()), fmt(s.continuum(0, 0).imag()), fmt(s.abs_err),
                            fmt(s.rel_err)});
    errs.push_back(s.rel_err);
    json entry;
    entry["M"] = s.M;
    for (const char* which : {"lattice", "continuum"}) {
      const SpinorMatrix& mat = std::string(which) == "lattice" ? s.lattice : s.continuum;
      json m = json::array();
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) m.push_back({mat(a, b).real(), mat(a, b).imag()});
      }
      entry[which] = m;
    }
    matrices.push_back(entry);
  }
  r.extra["matrices"] = matrices;
  r.pass = decreasing_below(errs, o.threshold.value_or(0.10));
  return r;
}

std::vector<FieldSign> parse_signs(const std::string& s) {
  std::vector<FieldSign> v;
  for (const auto& p : split(s, ',')) {
    try {
      v.push_back(parse_sign(p));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return v;
}

Report npoint_cmd(const Options& o) {
  Report r{"npoint", {{"mode", "n", "det_re", "det_im", "pn_abs", "value_re", "value_im"}, {}}};
  std::vector<Vec4> pts;
  for (const auto& p : split(o.points, ';')) pts.push_back(parse_vec4(p, "point"));
  const auto signs = parse_signs(o.signs);
  if (signs.size() != pts.size()) throw UsageError("--signs needs one sign per point");
  const std::vector<int> spinors = o.spinors.empty() ? std::vector<int>{} : parse_ints(o.spinors, "spinors");
  if (!spinors.empty() && spinors.size() != pts.size()) throw UsageError("--spinors needs one index per point");
  const ModelParams params{o.coupling_l, o.mass, o.mass_dirac};
  r.extra["fundamental_length"] = fundamental_length(o.coupling_l);
  try {
    cplx value;
    CorrelationMatrix C;
    if (o.mode == "schwinger") {
      C = build_C(pts, signs, params);
      value = npoint_schwinger(pts, signs, spinors, params);
    } else if (o.mode == "wightman") {
      // Imaginary offsets eps_j = (n - 1 - j) * eps keep the points in the tube.
      const auto eps = o.eps.empty() ? std::vector<double>{2.0 * fundamental_length(o.coupling_l)}
                                     : parse_doubles(o.eps, "eps");
      if (eps.size() != 1 || !(eps[0] > 0.0)) throw UsageError("wightman mode needs a single --eps gap > 0");
      WightmanConfig cfg;
      cfg.signs = signs;
      cfg.spinors = spinors;
      const int n = static_cast<int>(pts.size());
      for (int j = 0; j < n; ++j) {
        cfg.points.push_back({cplx(pts[j][0], -(n - 1 - j) * eps[0]), {pts[j][1], pts[j][2], pts[j][3]}});
      }
      C = build_A(cfg.points, cfg.signs, params);
      value = npoint_wightman(cfg, params);
    } else {
      throw UsageError("--mode must be schwinger or wightman");
    }
    const cplx det = C.det();
    r.table.rows.push_back({o.mode, std::to_string(pts.size()), fmt(det.real()), fmt(det.imag()),
                            fmt(std::abs(det - 1.0)), fmt(value.real()), fmt(value.imag())});
    r.extra["analytic"] = true;
  } catch (const AnalyticityError& e) {
    r.pass = false;
    r.extra["analytic"] = false;
    r.extra["violation"] = e.what();
  }
  return r;
}

Report contour_cmd(const Options& o) {
  Report r{"contour", {{"epsilon", "value_re", "value_im", "rel_dev"}, {}}};
  TwoPointKernel k;
  k.params = {o.coupling_l, o.mass, o.mass_dirac};
  if (o.kernel == "scalar") k.kind = KernelKind::scalar_pair;
  else if (o.kernel == "rho") k.kind = KernelKind::rho;
  else if (o.kernel == "dirac") k.kind = KernelKind::dirac_component;
  else throw UsageError("--kernel must be scalar, rho or dirac");
  if (!o.spinors.empty()) {
    const auto s = parse_ints(o.spinors, "spinors");
    if (s.size() != 2) throw UsageError("--spinors needs two indices for the contour kernel");
    k.alpha = s[0];
    k.beta = s[1];
  }
  const GaussianTestFunction base = default_test_function(o.coupling_l);
  std::array<cplx, 4> center = base.center();
  if (!o.tf_center.empty()) {
    const Vec4 c = parse_vec4(o.tf_center, "tf-center");
    center = {c[0], c[1], c[2], c[3]};
  }
  const double sigma = o.tf_sigma.value_or(base.sigma());
  if (!(sigma > 0.0)) throw UsageError("--tf-sigma must be positive");
  const GaussianTestFunction f(center, sigma);
  std::vector<double> eps;
  if (o.eps.empty()) {
    const double ell = fundamental_length(o.coupling_l);
    eps = o.coupling_l > 0.0 ? std::vector<double>{2.0 * ell, 2.5 * ell, 3.0 * ell}
                             : std::vector<double>{0.5, 1.0, 2.0};
  } else {
    eps = parse_doubles(o.eps, "eps");
  }
  const auto rows = contour_invariance_report(k, f, eps, o.nodes);
  const double tol = o.threshold.value_or(o.coupling_l > 0.0 ? 1e-5 : 1e-6);
  for (const auto& row : rows) {
    r.table.rows.push_back({fmt(row.epsilon), fmt(row.value.real()), fmt(row.value.imag()), fmt(row.rel_dev)});
    if (!(row.rel_dev < tol)) r.pass = false;
  }
  return r;
}

Report doubling_cmd(const Options& o) {
  Report r{"doubling", {{"scheme", "M", "N", "count"}, {}}};
  const auto Ms = parse_ints(o.M, "M");
  const auto Ns = n_list(o);
  if (!Ns.empty() && Ns.size() != Ms.size()) throw UsageError("N list must match the M list");
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    const LatticeParams p = make_lattice(Ms[i], Ns.empty() ? Ms[i] : Ns[i]);
    for (auto s : {DiscretizationScheme::forward_backward, DiscretizationScheme::central}) {
      r.table.rows.push_back({scheme_name(s), std::to_string(p.M), std::to_string(p.N),
                              std::to_string(doubling_count(s, p, 0.0))});
    }
  }
  return r;
}

struct OracleCheck {
  std::string name;
  double tolerance;
  std::function<double()> measure;
};

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<OracleCheck> oracle_checks(const LatticeParams& P, double m, double md, double perturb) {
  std::vector<OracleCheck> checks;
  const std::uint64_t V = P.volume();
  checks.push_back({"one_d_closed_vs_brute", 1e-11, [P] {
                      double worst = 0.0;
                      for (cplx B : {cplx(1.0), cplx(0.3, 0.2), cplx(2.0, -1.5), cplx(0.05, 0.0)}) {
                        for (long n = -P.L; n <= P.L; ++n) {
                          worst = std::max(worst, rel_diff(one_d_sum_closed(B, n, P),
                                                           periodic_resolvent_sum_direct(B * B, n, P)));
                        }
                      }
                      return worst;
                    }});
  checks.push_back({"scalar_accelerated_vs_direct", 1e-10, [=] {
                      double worst = 0.0;
                      const double mp = std::sqrt(m * m + perturb);
                      for (std::uint64_t i = 0; i < V; i += std::max<std::uint64_t>(1, V / 16)) {
                        const LatticeSite s = site_from_index(i, P);
                        worst = std::max(worst, rel_diff(lattice_propagator_accel(P, mp, s),
                                                         lattice_propagator_direct(P, m, s)));
                      }
                      return worst;
                    }});
  checks.push_back({"scalar_direct_vs_dense", 1e-10, [=] {
                      const Eigen::VectorXd col = dense_propagator_column(P, m);
                      double worst = 0.0;
                      for (std::uint64_t i = 0; i < V; i += std::max<std::uint64_t>(1, V / 16)) {
                        worst = std::max(worst, rel_diff(lattice_propagator_direct(P, m, site_from_index(i, P)),
                                                         col[static_cast<Eigen::Index>(i)]));
                      }
                      return worst;
                    }});
  checks.push_back({"scalar_direct_vs_reference", 1e-12, [=] {
                      const LatticeSite s = site_from_index(V / 3, P);
                      return rel_diff(lattice_propagator_direct(P, m, s), reference::scalar_propagator(P, m, s));
                    }});
  checks.push_back({"dirac_analytic_vs_lu_inverse", 1e-12, [=] {
                      double worst = 0.0;
                      for (std::uint64_t i = 0; i < V; ++i) {
                        const MomentumPoint p = momentum_from_index(i, P);
                        const SpinorMatrix d = momentum_inverse_direct(p, md, P);
                        worst = std::max(worst, (momentum_inverse_analytic(p, md, P) - d).cwiseAbs().maxCoeff() /
                                                    d.cwiseAbs().maxCoeff());
                      }
                      return worst;
                    }});
  checks.push_back({"dirac_direct_vs_dense", 1e-10, [=] {
                      const Eigen::MatrixXcd O = dense_dirac_oracle(P, md);
                      double worst = 0.0;
                      for (std::uint64_t i = 0; i < V; i += std::max<std::uint64_t>(1, V / 16)) {
                        const LatticeSite s = site_from_index(i, P);
                        const SpinorMatrix d = dense_dirac_block(O, s, P);
                        worst = std::max(worst, (dirac_sum_direct(P, md, s).value - d).cwiseAbs().maxCoeff() /
                                                    d.cwiseAbs().maxCoeff());
                      }
                      return worst;
                    }});
  checks.push_back({"dirac_accelerated_vs_direct", 1e-10, [=] {
                      const LatticeSite s = site_from_index(V / 2 + 1, P);
                      const SpinorMatrix d = dirac_sum_direct(P, md, s).value;
                      return (dirac_sum_accelerated(P, md, s).value - d).cwiseAbs().maxCoeff() /
                             d.cwiseAbs().maxCoeff();
                    }});
  checks.push_back({"dirac_direct_vs_reference", 1e-12, [=] {
                      const LatticeSite s = site_from_index(V / 3, P);
                      const SpinorMatrix d = reference::dirac_propagator(P, md, s);
                      return (dirac_sum_direct(P, md, s).value - d).cwiseAbs().maxCoeff() / d.cwiseAbs().maxCoeff();
                    }});
  checks.push_back({"fourier_round_trip", 1e-12, [P] {
                      LatticeField f(P.volume());
                      for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(std::sin(0.7 * i), std::cos(1.3 * i));
                      const LatticeField g = lattice_fourier_inverse(lattice_fourier_forward(f, P), P);
                      double worst = 0.0;
                      for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - g[i]));
                      return worst;
                    }});
  checks.push_back({"gaussian_identity_A", 1e-7, [] {
                      Eigen::MatrixXd L(3, 3);
                      L << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
                      Eigen::VectorXd y(3);
                      y << 0.4, -0.7, 0.2;
                      return gaussian_identity_A(L, y).abs_diff;
                    }});
  checks.push_back({"gaussian_identity_B", 1e-7, [] {
                      Eigen::MatrixXd L(2, 2);
                      L << 1.2, 0.4, 0.4, 0.9;
                      Eigen::MatrixXd A(2, 2);
                      A << 0.5, -0.3, 0.2, 1.1;
                      return gaussian_identity_B(L, A).abs_diff;
                    }});
  checks.push_back({"wick_two_point_vs_quadrature", 1e-8, [] {
                      double worst = 0.0;
                      for (double S : {-0.45, -0.2, 0.1, 0.4, 0.47}) {
                        worst = std::max(worst, std::abs(wick_two_point(1.0, S) - wick_two_point_quadrature(1.0, S)));
                      }
                      return worst;
                    }});
  checks.push_back({"wightman_closed_vs_quadrature", 1e-9, [m] {
                      return rel_diff(scalar_two_point_closed(m, cplx(0.6, 0.8), 0.5),
                                      wightman_minus(m, 0.8, 0.6, {0.3, 0.4, 0.0}));
                    }});
  checks.push_back({"dirac_closed_vs_quadrature", 1e-9, [md] {
                      const SpinorMatrix q = continuum_dirac_schwinger(md, {0.7, 0.2, -0.3, 0.4});
                      return (dirac_two_point_closed(md, 0.7, {0.2, -0.3, 0.4}) - q).cwiseAbs().maxCoeff() /
                             q.cwiseAbs().maxCoeff();
                    }});
  return checks;
}

Report oracle_cmd(const Options& o) {
  Report r{"oracle", {{"check", "value", "tolerance", "pass"}, {}}};
  const auto Ms = parse_ints(o.M, "M");
  const auto Ns = n_list(o);
  if (Ms.size() != 1 || Ns.size() > 1) throw UsageError("oracle takes a single --M and --N");
  const LatticeParams P = make_lattice(Ms[0], Ns.empty() ? Ms[0] : Ns[0]);
  if (4 * P.volume() > kDenseRowLimit) throw UsageError("oracle needs 4 (2MN)^4 <= 4096 for the dense checks");
  for (const auto& c : oracle_checks(P, o.mass, o.mass_dirac, o.perturb)) {
    const double v = c.measure();
    const bool ok = v <= c.tolerance;
    r.pass = r.pass && ok;
    r.table.rows.push_back({c.name, fmt(v), fmt(c.tolerance), ok ? "true" : "false"});
  }
  return r;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--M", o.M, "Comma-separated list of M values");
  app->add_option("--N", o.N, "Comma-separated list of N values (default N = M)");
  app->add_option("--mass", o.mass, "Scalar mass m");
  app->add_option("--mass-dirac", o.mass_dirac, "Dirac mass");
  app->add_option("--coupling-l", o.coupling_l, "Coupling length l");
  app->add_option("--x", o.x, "Continuum point x0,x1,x2,x3");
  app->add_option("--points", o.points, "Points t,x,y,z separated by ';'");
  app->add_option("--signs", o.signs, "Field signs, '-' for psi and '+' for psi-bar");
  app->add_option("--spinors", o.spinors, "Spinor indices 0..3, one per point");
  app->add_option("--eps", o.eps, "Contour shifts (comma-separated)");
  app->add_option("--mode", o.mode, "npoint mode: schwinger or wightman");
  app->add_option("--kernel", o.kernel, "contour kernel: scalar, rho or dirac");
  app->add_option("--nodes", o.nodes, "Gauss-Legendre nodes per axis");
  app->add_option("--tf-sigma", o.tf_sigma, "Test function width");
  app->add_option("--tf-center", o.tf_center, "Test function center");
  app->add_option("--out", o.out, "Output file (default stdout)");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--threads", o.threads, "OpenMP threads (default QFLAT_THREADS)");
  app->add_option("--threshold", o.threshold, "Pass threshold");
  app->add_option("--config", o.config, "JSON config overriding flags");
  app->add_option("--perturb", o.perturb, "Shift added to m^2 in one oracle kernel")->group("");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice and continuum propagators for the Dirac-scalar model"};
  app.require_subcommand(1);
  Options o;
  using Handler = std::function<Report(const Options&)>;
  const std::vector<std::pair<std::string, Handler>> commands = {
      {"converge-scalar", converge_scalar_cmd}, {"converge-dirac", converge_dirac_cmd},
      {"npoint", npoint_cmd},                   {"contour", contour_cmd},
      {"doubling", doubling_cmd},               {"oracle", oracle_cmd}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, handler] : commands) {
    subs.push_back(app.add_subcommand(name));
    add_common(subs.back(), o);
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    apply_config(o);
    if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
    int threads = o.threads;
    if (threads <= 0) {
      if (const char* env = std::getenv("QFLAT_THREADS")) threads = std::atoi(env);
    }
    set_thread_count(threads);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const Report r = commands[i].second(o);
      emit(r, o, out);
      if (!r.pass) {
        if (r.extra.contains("violation")) err << r.extra["violation"].get<std::string>() << "\n";
        return kExitCriterionFailed;
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qflat::cli
