#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include "bloch/bloch.hpp"

namespace bloch::cli {
namespace {

namespace fs = std::filesystem;

struct Context {
  json config;
  std::optional<OperatorSpec> spec;
  fs::path out;
  double tol_scale = 1.0;
  std::ostream* log = nullptr;
  std::vector<std::string> formats;  // subset of csv, json, bin

  bool wants(const fs::path& name) const {
    const std::string ext = name.extension().string().substr(1);
    return std::find(formats.begin(), formats.end(), ext) != formats.end();
  }

  const OperatorSpec& op() const {
    if (!spec) throw ValidationError("this command needs an operator (--preset or 'operator'/'preset' in --config)");
    return *spec;
  }
  int dim() const { return op().dimension(); }
};

template <class T>
T param(Context& c, const std::string& key, T fallback) {
  json& p = c.config["parameters"];
  if (!p.contains(key)) p[key] = fallback;
  try {
    return p[key].get<T>();
  } catch (const json::exception&) {
    throw ValidationError("parameter '" + key + "' has the wrong type");
  }
}

int positive(Context& c, const std::string& key, int fallback) {
  const int v = param<int>(c, key, fallback);
  if (v < 1) throw ValidationError("parameter '" + key + "' must be positive");
  return v;
}

double positive_real(Context& c, const std::string& key, double fallback) {
  const double v = param<double>(c, key, fallback);
  if (!(v > 0.0)) throw ValidationError("parameter '" + key + "' must be positive");
  return v;
}

std::vector<int> positive_list(Context& c, const std::string& key, std::vector<int> fallback) {
  const auto v = param<std::vector<int>>(c, key, std::move(fallback));
  if (v.empty()) throw ValidationError("parameter '" + key + "' must be non-empty");
  for (int x : v)
    if (x < 1) throw ValidationError("parameter '" + key + "' must contain positive integers");
  return v;
}

std::vector<double> theta_param(Context& c, int dim) {
  const auto th = param<std::vector<double>>(c, "theta", std::vector<double>(dim, 0.0));
  if (static_cast<int>(th.size()) != dim) throw ValidationError("parameter 'theta' must have d entries");
  return th;
}

void write_json(const Context& c, const std::string& name, json body) {
  if (!c.wants(name)) return;
  body["config"] = c.config;
  std::ofstream f(c.out / name);
  f << rounded(body).dump(2) << '\n';
  if (!f) throw ValidationError("cannot write " + (c.out / name).string());
  *c.log << "wrote " << (c.out / name).string() << '\n';
}

template <class Writer>
void write_file(const Context& c, const std::string& name, Writer w, bool binary = false) {
  if (!c.wants(name)) return;
  std::ofstream f(c.out / name, binary ? std::ios::binary : std::ios::out);
  w(f);
  if (!f) throw ValidationError("cannot write " + (c.out / name).string());
  *c.log << "wrote " << (c.out / name).string() << '\n';
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

IntMatrix lattice_param(Context& c, int dim) {
  std::vector<std::vector<long>> def(dim, std::vector<long>(dim, 0));
  for (int i = 0; i < dim; ++i) def[i][i] = 2;
  const auto rows = param<std::vector<std::vector<long>>>(c, "M", def);
  if (static_cast<int>(rows.size()) != dim) throw ValidationError("parameter 'M' must be d x d");
  IntMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[i].size()) != dim) throw ValidationError("parameter 'M' must be d x d");
    for (int j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  }
  if (determinant(m) == 0) throw SingularMatrix("parameter 'M' is singular");
  return m;
}

// ---- commands -------------------------------------------------------------

void cmd_bands(Context& c) {
  const int d = c.dim();
  const int grid = positive(c, "G", d == 1 ? 32 : 12);
  const int cutoff = positive(c, "K", d == 1 ? 16 : 4);
  const int n_max = param<int>(c, "n_max", 6);
  const BandStructure bs = band_sweep(c.op(), grid, cutoff, n_max);
  const BandReport r = band_report(bs);
  write_file(c, "bands.csv", [&](std::ostream& os) { write_bands_csv(os, bs); });
  write_json(c, "bands.json", {{"report", band_report_to_json(r)}});
}

void cmd_homogenize(Context& c) {
  const int d = c.dim();
  const int cutoff = positive(c, "K", d == 1 ? 16 : 6);
  const bool symmetrize = param<bool>(c, "symmetrize", false);
  std::vector<int> def_stability;
  for (int k : {cutoff / 2, cutoff, cutoff + 4}) def_stability.push_back(std::max(1, k));
  const auto stability = positive_list(c, "stability_cutoffs", def_stability);

  const CellSolution cell = cell_solve(c.op(), cutoff);
  const HomogenizedOperator h = homogenize(c.op(), cutoff, symmetrize);
  json table = json::array();
  std::optional<Eigen::MatrixXcd> previous;
  for (int k : stability) {
    const Eigen::MatrixXcd ck = homogenize(c.op(), k, symmetrize).C_hat;
    json row = {{"K", k}, {"C_hat", matrix_json(ck)}};
    row["max_change"] = previous ? json((ck - *previous).cwiseAbs().maxCoeff()) : json(nullptr);
    previous = ck;
    table.push_back(row);
  }
  write_file(c, "homogenized_stability.csv", [&](std::ostream& os) {
    os << "K,i,j,re,im\n";
    for (int k : stability) {
      const Eigen::MatrixXcd ck = homogenize(c.op(), k, symmetrize).C_hat;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          os << k << ',' << i << ',' << j << ',' << format_double(ck(i, j).real()) << ','
             << format_double(ck(i, j).imag()) << '\n';
    }
  });
  write_json(c, "homogenized.json",
             {{"homogenized", homogenized_to_json(h)},
              {"cell_residuals", vector_json(cell.residuals)},
              {"cutoff_stability", table}});
}

void cmd_refine(Context& c) {
  const int d = c.dim();
  const auto theta = theta_param(c, d);
  const auto n_list = positive_list(c, "N_list", d == 1 ? std::vector<int>{2, 4, 8} : std::vector<int>{2});
  const int n_show = positive(c, "n_show", 6);
  const int cutoff = positive(c, "K", d == 1 ? 8 : 3);
  const auto rows = refinement_limit(c.op(), theta, n_list, n_show, cutoff);
  json table = json::array();
  std::vector<double> checks;
  for (const auto& r : rows) {
    checks.push_back(refinement_check(c.op(), theta, r.n, cutoff));
    table.push_back({{"N", r.n},
                     {"check_deviation", checks.back()},
                     {"limit_deviation", r.deviation},
                     {"refined", vector_json(r.refined)},
                     {"homogenized", vector_json(r.homogenized)}});
  }
  write_file(c, "refine.csv", [&](std::ostream& os) {
    os << "N,check_deviation,limit_deviation\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      os << rows[i].n << ',' << format_double(checks[i]) << ',' << format_double(rows[i].deviation) << '\n';
  });
  write_json(c, "refine.json", {{"rows", table}});
  *c.log << "N,check_deviation,limit_deviation\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    *c.log << rows[i].n << ',' << format_double(checks[i]) << ',' << format_double(rows[i].deviation) << '\n';
}

void cmd_heat(Context& c) {
  const int d = c.dim();
  const double t = positive_real(c, "t", 1.0);
  const auto theta = theta_param(c, d);
  const auto m_list = positive_list(c, "m_list", d == 1 ? std::vector<int>{1, 2, 4, 8} : std::vector<int>{1, 2});
  const int cutoff = positive(c, "K", d == 1 ? 32 : 4);
  const Quasimomentum q{theta};

  const HomogenizedOperator h = homogenize(c.op(), cutoff);
  const EigenSystem es = eig_hermitian(assemble(c.op(), q, cutoff));
  const EigenSystem eh = eig_hermitian(assemble_homogenized(h, q, cutoff));
  const TraceHsReport ineq = check_trace_hs_inequalities(heat_fiber(es, t).matrix, heat_fiber(es, t / 2).matrix,
                                                         heat_fiber(eh, t).matrix, heat_fiber(eh, t / 2).matrix);
  auto ineq_json = [](const InequalityCheck& x) {
    return json{{"lhs", x.lhs}, {"rhs", x.rhs}, {"slack", x.slack()}, {"holds", x.holds()}};
  };

  json table = json::array();
  std::vector<HomogConvergenceRow> rows;
  if (c.op().pure_second_order()) rows = homog_convergence(c.op(), q, t, m_list, cutoff);
  for (const auto& r : rows)
    table.push_back({{"m", r.m},
                     {"trace_distance", r.trace_distance},
                     {"hs_distance", r.hs_distance},
                     {"eigen_sum", r.eigen_sum},
                     {"cutoff_change", r.cutoff_change}});
  write_file(c, "heat.csv", [&](std::ostream& os) {
    os << "m,trace_distance,hs_distance,eigen_sum,cutoff_change\n";
    for (const auto& r : rows)
      os << r.m << ',' << format_double(r.trace_distance) << ',' << format_double(r.hs_distance) << ','
         << format_double(r.eigen_sum) << ',' << format_double(r.cutoff_change) << '\n';
  });
  write_json(c, "heat.json",
             {{"fiber_trace", heat_fiber(es, t).trace().real()},
              {"inequalities",
               {{"square_s", ineq_json(ineq.square_s)},
                {"square_t", ineq_json(ineq.square_t)},
                {"difference", ineq_json(ineq.difference)}}},
              {"homog_convergence", table}});
}

void cmd_kernel(Context& c) {
  const int d = c.dim();
  const double t = positive_real(c, "t", 0.5);
  const int quadrature = positive(c, "Q", d == 1 ? 64 : 12);
  const int cutoff = positive(c, "K", d == 1 ? 16 : 4);
  const int window = param<int>(c, "W", 2);
  const int resolution = positive(c, "P", d == 1 ? 8 : 4);
  const double b = positive_real(c, "b", 0.25);
  const int scale = positive(c, "scale_m", 2);

  const KernelGrid k = kernel_line(c.op(), t, window, quadrature, resolution, cutoff);
  const double a = gaussian_bound_fit(k, t, b);
  json scaling = nullptr;
  if (c.op().pure_second_order()) scaling = scaling_check(c.op(), scale, t, quadrature, cutoff, k.x, k.y);
  write_file(c, "kernel.csv", [&](std::ostream& os) {
    for (int i = 0; i < d; ++i) os << "x_" << i << ',';
    for (int i = 0; i < d; ++i) os << "y_" << i << ',';
    os << "re,im\n";
    for (Eigen::Index r = 0; r < k.x.rows(); ++r)
      for (Eigen::Index s = 0; s < k.y.rows(); ++s) {
        for (int i = 0; i < d; ++i) os << format_double(k.x(r, i)) << ',';
        for (int i = 0; i < d; ++i) os << format_double(k.y(s, i)) << ',';
        os << format_double(k.values(r, s).real()) << ',' << format_double(k.values(r, s).imag()) << '\n';
      }
  });
  write_json(c, "kernel.json", {{"gaussian_fit_a", a}, {"b", b}, {"scaling_deviation", scaling}});
}

struct ZakErrors {
  double parseval = 0, roundtrip = 0, parseval_general = 0, refine_mean = 0, embed = 0, projection = 0;
};

ZakErrors zak_errors(const SampledSignal& f, const IntMatrix& m, int quadrature, ZakArray* z_out = nullptr,
                     ZakArray* zm_out = nullptr) {
  ZakErrors e;
  const ZakArray z = zak_forward(f, quadrature);
  e.parseval = std::abs(zak_norm(z) - f.norm());
  const SampledSignal back = zak_inverse(z, f.window);
  for (std::size_t i = 0; i < f.values.size(); ++i) e.roundtrip = std::max(e.roundtrip, std::abs(back.values[i] - f.values[i]));
  const ZakArray zm = zak_forward_general(f, m, quadrature);
  e.parseval_general = std::abs(zak_norm_general(zm, m) - f.norm());
  e.refine_mean = (zak_refine_mean(zm, m).values - z.values).cwiseAbs().maxCoeff();
  e.embed = (zak_embed_all(z, m).values - zm.values).cwiseAbs().maxCoeff();
  const std::vector<double> tz = z.theta(z.nodes.size() / 2);
  const Eigen::VectorXcd data = z.values.row(z.nodes.size() / 2).transpose();
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(data.size());
  for (const auto& w : root_thetas(m, tz)) {
    const Eigen::VectorXcd pw = zak_project(data, f.dim, f.resolution, tz, m, w);
    total += pw;
    e.projection = std::max(e.projection,
                            (zak_project(pw, f.dim, f.resolution, tz, m, w) - pw).cwiseAbs().maxCoeff());
  }
  e.projection = std::max(e.projection, (total - data).cwiseAbs().maxCoeff());
  if (z_out) *z_out = z;
  if (zm_out) *zm_out = zm;
  return e;
}

json zak_errors_json(const ZakErrors& e) {
  return {{"parseval", e.parseval},       {"roundtrip", e.roundtrip}, {"parseval_general", e.parseval_general},
          {"refine_mean", e.refine_mean}, {"embed", e.embed},         {"projection", e.projection}};
}

void cmd_zak(Context& c) {
  const int d = positive(c, "dim", 1);
  const IntMatrix m = lattice_param(c, d);
  const int resolution = positive(c, "P", static_cast<int>(lattice_exponent(m)) * 2);
  const int window = param<int>(c, "W", 2);
  const int quadrature = positive(c, "Q", 2 * window + 2);
  const auto seed = param<std::uint64_t>(c, "seed", 1);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SampledSignal f = zero_signal(d, resolution, window);
  for (auto& v : f.values) v = {g(rng), g(rng)};
  ZakArray z, zm;
  const ZakErrors e = zak_errors(f, m, quadrature, &z, &zm);
  write_file(c, "signal.csv", [&](std::ostream& os) { write_signal_csv(os, f); });
  write_file(c, "zak.csv", [&](std::ostream& os) { write_zak_csv(os, z); });
  write_file(c, "zak_general.csv", [&](std::ostream& os) { write_zak_csv(os, zm); });
  write_json(c, "zak.json", {{"signal_norm", f.norm()}, {"residue_count", residues(m).size()},
                             {"errors", zak_errors_json(e)}});
}

void cmd_fiber(Context& c) {
  const int d = c.dim();
  const auto theta = theta_param(c, d);
  const int cutoff = positive(c, "K", d == 1 ? 8 : 3);
  const FiberMatrix a = assemble(c.op(), Quasimomentum{theta}, cutoff);
  write_file(c, "fiber.csv", [&](std::ostream& os) { write_fiber_csv(os, a); });
  write_file(c, "fiber.bin", [&](std::ostream& os) { write_fiber_binary(os, a); }, true);
  write_json(c, "fiber.json", {{"rows", a.entries.rows()}, {"hermitian", a.hermitian},
                               {"hermitian_defect", hermitian_defect(a.entries)}});
}

// Runs the invariant suite; returns false when any check fails.
bool cmd_check(Context& c) {
  const OperatorSpec& spec = c.op();
  const int d = spec.dimension();
  const int cutoff = positive(c, "K", d == 1 ? 8 : 3);
  const double t = positive_real(c, "t", 0.5);
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol * c.tol_scale;
    all = all && ok;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol * c.tol_scale}, {"pass", ok}});
  };

  validate(spec);
  std::vector<Quasimomentum> thetas = {Quasimomentum::zero(d), Quasimomentum{std::vector<double>(d, 0.7)},
                                       Quasimomentum{std::vector<double>(d, -2.3)}};
  double herm = 0, resid = 0, unitary = 0, trace = 0, mono = 0, shift = 0, reversal = 0;
  for (const auto& q : thetas) {
    const FiberMatrix a = assemble(spec, q, cutoff);
    const double scale = std::max(1.0, a.entries.cwiseAbs().maxCoeff());
    herm = std::max(herm, hermitian_defect(a.entries) / scale);
    if (!spec.self_adjoint()) continue;
    const EigenSystem es = eig_hermitian(a);
    const double anorm = operator_norm(a.entries);
    resid = std::max(resid, (a.entries * es.vectors - es.vectors * es.values.asDiagonal()).cwiseAbs().maxCoeff() /
                                std::max(1.0, anorm));
    unitary = std::max(unitary, (es.vectors.adjoint() * es.vectors -
                                 Eigen::MatrixXcd::Identity(es.size(), es.size())).cwiseAbs().maxCoeff());
    trace = std::max(trace, std::abs(es.values.sum() - a.entries.trace().real()) /
                                (std::max(1.0, anorm) * static_cast<double>(es.size())));
    const EigenSystem wider = eig_hermitian(assemble(spec, q, cutoff + 1));
    for (std::size_t n = 0; n < es.size(); ++n) mono = std::max(mono, wider.values(n) - es.values(n));
    const EigenSystem shifted = eig_hermitian(assemble(shift_zeroth(spec, 1.5), q, cutoff));
    shift = std::max(shift, (shifted.values - es.values - Eigen::VectorXd::Constant(es.size(), 1.5)).cwiseAbs().maxCoeff());
    std::vector<double> neg = q.theta;
    for (double& x : neg) x = -x;
    const EigenSystem rev = eig_hermitian(assemble(spec, Quasimomentum{neg}, cutoff));
    reversal = std::max(reversal, (rev.values - es.values).cwiseAbs().maxCoeff() / std::max(1.0, anorm));
  }
  record("fiber_hermiticity", herm, 1e-12);
  if (spec.self_adjoint()) {
    record("eigen_residual", resid, 1e-9);
    record("eigenvector_unitarity", unitary, 1e-10);
    record("trace_consistency", trace, 1e-9);
    record("galerkin_monotonicity", std::max(0.0, mono), 1e-9);
    record("shift_invariance", shift, 1e-10);
    record("time_reversal", reversal, 1e-9);

    const HomogenizedOperator h = homogenize(spec, cutoff);
    record("homogenized_hermiticity", hermitian_defect(h.C_hat), 1e-10);
    const Quasimomentum q = thetas[1];
    const EigenSystem es = eig_hermitian(assemble(spec, q, cutoff));
    const EigenSystem eh = eig_hermitian(assemble_homogenized(h, q, cutoff));
    try {
      const TraceHsReport r = check_trace_hs_inequalities(heat_fiber(es, t).matrix, heat_fiber(es, t / 2).matrix,
                                                          heat_fiber(eh, t).matrix, heat_fiber(eh, t / 2).matrix);
      record("trace_hs_inequalities", -std::min({r.square_s.slack(), r.square_t.slack(), r.difference.slack()}),
             kInequalityRoundoff * (1.0 + r.difference.rhs));
    } catch (const InvariantViolation&) {
      record("trace_hs_inequalities", 1.0, 0.0);
    }
    const FiberSemigroup s = heat_fiber(es, t);
    record("semigroup_trace", std::abs(s.trace().real() - s.weights.sum()), 1e-10);
    record("spectral_vs_exponential",
           (heat_fiber_general(assemble(spec, q, cutoff), t).matrix - s.matrix).cwiseAbs().maxCoeff(), 1e-9);
    if (spec.pure_second_order()) {
      double worst = 0.0;
      for (int n : {2, 3}) worst = std::max(worst, refinement_check(spec, q.theta, n, std::max(2, cutoff / 2)));
      record("refinement_exactness", worst, 1e-8);
      try {
        homog_convergence(spec, q, t, {1, 2}, cutoff);
        record("eigen_sum_bound", 0.0, 0.0);
      } catch (const InvariantViolation&) {
        record("eigen_sum_bound", 1.0, 0.0);
      }
    }
  }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  SampledSignal f = zero_signal(1, 4, 2);
  for (auto& v : f.values) v = {g(rng), g(rng)};
  const ZakErrors e = zak_errors(f, scaled_identity(1, 2), 6);
  record("zak_identities",
         std::max({e.parseval, e.roundtrip, e.parseval_general, e.refine_mean, e.embed, e.projection}), 1e-12);

  write_json(c, "check.json", {{"passed", all}, {"checks", checks}});
  return all;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bloch/Zak spectral analysis of periodic elliptic operators"};
  app.require_subcommand(1);
  std::string config_path, preset_name, out_dir = ".", profile = "default";
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset_name, "operator preset (overrides the config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: $BLOCH_THREADS or all cores)");
  app.add_option("--tolerance-profile", profile, "check tolerances")->check(CLI::IsMember({"default", "loose"}));
  const char* names[] = {"bands", "homogenize", "refine", "heat", "kernel", "zak", "check", "fiber"};
  const char* help[] = {"band structure sweep and gap report",
                        "cell problem and homogenized coefficients",
                        "spectral refinement tables",
                        "heat-semigroup trace diagnostics",
                        "line kernel, Gaussian fit and scaling check",
                        "Zak transform identities on a random signal",
                        "run the invariant suite (exit 3 on violation)",
                        "dump one fiber matrix as CSV and binary"};
  for (int i = 0; i < 8; ++i) app.add_subcommand(names[i], help[i])->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (threads <= 0)
      if (const char* env = std::getenv("BLOCH_THREADS")) threads = std::atoi(env);
    if (threads > 0) set_thread_count(threads);

    Context c;
    c.log = &out;
    c.tol_scale = profile == "loose" ? 100.0 : 1.0;
    json file = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot read config " + config_path);
      try {
        file = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!file.is_object()) throw ValidationError("config must be a JSON object");
    }
    const std::string command = app.get_subcommands().front()->get_name();
    c.config["command"] = command;
    c.config["tolerance_profile"] = profile;
    if (!preset_name.empty()) file["preset"] = preset_name;
    if (file.contains("preset") && file.contains("operator") && preset_name.empty())
      throw ValidationError("config has both 'preset' and 'operator'");
    if (file.contains("preset")) {
      c.config["preset"] = file["preset"];
      c.spec = preset(file["preset"].get<std::string>());
    } else if (file.contains("operator")) {
      c.spec = spec_from_json(file["operator"]);
    }
    if (c.spec) {
      validate(*c.spec);
      c.config["operator"] = spec_to_json(*c.spec);
    }
    c.config["parameters"] = file.value("parameters", json::object());
    json formats = json::array({"csv", "json", "bin"});
    if (file.contains("output")) formats = file["output"].value("formats", formats);
    try {
      c.formats = formats.get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw ValidationError("'output.formats' must be a list of strings");
    }
    for (const auto& f : c.formats)
      if (f != "csv" && f != "json" && f != "bin") throw ValidationError("unknown output format '" + f + "'");
    c.config["output"] = {{"formats", formats}};
    if (!c.config["parameters"].is_object()) throw ValidationError("'parameters' must be an object");

    c.out = out_dir;
    fs::create_directories(c.out);
    bool ok = true;
    if (command == "bands") cmd_bands(c);
    else if (command == "homogenize") cmd_homogenize(c);
    else if (command == "refine") cmd_refine(c);
    else if (command == "heat") cmd_heat(c);
    else if (command == "kernel") cmd_kernel(c);
    else if (command == "zak") cmd_zak(c);
    else if (command == "fiber") cmd_fiber(c);
    else ok = cmd_check(c);
    {
      std::ofstream f(c.out / "resolved_config.json");
      f << rounded(c.config).dump(2) << '\n';
    }
    if (!ok) {
      err << "invariant check failed; see " << (c.out / "check.json").string() << '\n';
      return kExitInvariant;
    }
    return kExitOk;
  } catch (const InvariantViolation& e) {
    err << e.what() << '\n';
    return kExitInvariant;
  } catch (const ConvergenceFailure& e) {
    err << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "ValidationError: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "ValidationError: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace bloch::cli
