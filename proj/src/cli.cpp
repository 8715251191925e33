#include "qosc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qosc/errors.hpp"
#include "qosc/fock.hpp"
#include "qosc/jacobi.hpp"
#include "qosc/qfourier.hpp"
#include "qosc/spectra.hpp"
#include "qosc/verify.hpp"

namespace qosc::cli {
namespace {

using json = nlohmann::ordered_json;

const std::map<std::string, Command> kCommands = {
    {"spectrum", Command::Spectrum},   {"hamiltonian", Command::Hamiltonian},
    {"polys", Command::Polys},         {"eigenfunction", Command::Eigenfunction},
    {"transform", Command::Transform}, {"locate", Command::Locate},
    {"verdict", Command::Verdict},     {"verify", Command::Verify},
};

const char* command_name(Command c) {
  for (const auto& [name, value] : kCommands)
    if (value == c) return name.c_str();
  return "?";
}

/// 17 significant digits, the CSV counterpart of the JSON number format.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json header(const CliConfig& c) {
  return json{{"schema_version", kSchemaVersion}, {"q", c.q}, {"command", command_name(c.command)}};
}

/// Infinities and NaN are not JSON numbers; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

struct Emitted {
  std::string text;
  int code = kOk;
};

Emitted as_json(const json& doc, int code = kOk) { return {doc.dump(2) + "\n", code}; }

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw std::invalid_argument(std::string("missing required option ") + flag);
  return *v;
}

SpectralWindow window_of(const CliConfig& c, int default_radius) {
  if (!c.window) return SpectralWindow::symmetric(default_radius);
  return {c.window->first, c.window->second};
}

std::size_t n_max_of(const CliConfig& c, int fallback) {
  const int n = c.n_max.value_or(fallback);
  if (n < 0) throw std::invalid_argument("--nmax must be non-negative");
  return static_cast<std::size_t>(n);
}

Emitted spectrum(const CliConfig& c, const QParameters& params) {
  ExtremalMeasure m(params, require(c.b, "--b"), c.kind, c.tol);
  const SpectralWindow w = window_of(c, 10);
  if (c.format == Format::Csv) {
    const std::size_t level = static_cast<std::size_t>(c.state.value_or(0));
    Tolerance loose = c.tol;
    loose.tail_eps = 1.0;
    const GridFunction f = isometry_omega(FockVector::basis(level, level), m, w, loose);
    std::ostringstream os;
    os << "r,x,m_r,value_re,value_im\n";
    for (int r = w.r_min; r <= w.r_max; ++r)
      os << r << ',' << num(spectrum_point(m, r)) << ',' << num(weight(m, r).value) << ','
         << num(f.at(r).real()) << ',' << num(f.at(r).imag()) << '\n';
    return {os.str()};
  }
  json doc = header(c);
  doc["b"] = m.b();
  doc["kind"] = to_string(c.kind);
  json points = json::array();
  for (int r = w.r_min; r <= w.r_max; ++r)
    points.push_back({{"r", r}, {"x", spectrum_point(m, r)}, {"weight", weight(m, r).value}});
  doc["points"] = std::move(points);
  return as_json(doc);
}

Emitted hamiltonian(const CliConfig& c, const QParameters& params) {
  const std::size_t N = n_max_of(c, 10);
  if (c.format == Format::Csv) {
    std::ostringstream os;
    os << "n,energy\n";
    for (std::size_t n = 0; n <= N; ++n) os << n << ',' << num(hamiltonian_eigenvalue(n, params)) << '\n';
    return {os.str()};
  }
  json doc = header(c);
  json levels = json::array();
  for (std::size_t n = 0; n <= N; ++n)
    levels.push_back({{"n", n}, {"energy", hamiltonian_eigenvalue(n, params)}});
  doc["levels"] = std::move(levels);
  return as_json(doc);
}

Emitted polys(const CliConfig& c, const QParameters& params) {
  const double x = require(c.x, "--x");
  const std::size_t N = n_max_of(c, 10);
  std::vector<complex> values;
  if (c.kind == Kind::Position) {
    for (double v : P_family(N, x, params)) values.emplace_back(v);
  } else {
    values = P_tilde_family(N, x, params);
  }
  if (c.format == Format::Csv) {
    std::ostringstream os;
    os << "n,value_re,value_im\n";
    for (std::size_t n = 0; n <= N; ++n)
      os << n << ',' << num(values[n].real()) << ',' << num(values[n].imag()) << '\n';
    return {os.str()};
  }
  json doc = header(c);
  doc["kind"] = to_string(c.kind);
  doc["x"] = x;
  json arr = json::array();
  for (std::size_t n = 0; n <= N; ++n) {
    if (c.kind == Kind::Position)
      arr.push_back({{"n", n}, {"value", values[n].real()}});
    else
      arr.push_back({{"n", n}, {"value", {values[n].real(), values[n].imag()}}});
  }
  doc["values"] = std::move(arr);
  return as_json(doc);
}

Emitted eigenfunction(const CliConfig& c, const QParameters& params) {
  const double x = require(c.x, "--x");
  const double y = require(c.y, "--y");
  const std::size_t N = n_max_of(c, 200);
  EigenfunctionValue product;
  complex series;
  if (c.kind == Kind::Position) {
    product = eigenfunction_product(x, y, params, c.tol);
    series = eigenfunction_series(x, y, params, N);
  } else {
    product = momentum_eigenfunction_product(x, y, params, c.tol);
    series = momentum_eigenfunction_series(x, y, params, N);
  }
  if (!product.converged) throw NonConvergence("eigenfunction product did not converge");
  json doc = header(c);
  doc["kind"] = to_string(c.kind);
  doc["x"] = x;
  doc["y"] = y;
  doc["product"] = {product.value.real(), product.value.imag()};
  doc["series"] = {series.real(), series.imag()};
  doc["series_terms"] = N + 1;
  doc["relative_deviation"] = number(std::abs(product.value - series) / std::max(1.0, std::abs(series)));
  return as_json(doc);
}

Emitted transform(const CliConfig& c, const QParameters& params) {
  if (c.matrix != "F" && c.matrix != "T") throw std::invalid_argument("--matrix must be F or T");
  const double b = require(c.b, "--b");
  const double bp = c.b_prime.value_or(b);
  TransformOptions options;
  if (c.validate) {
    if (*c.validate < 0) throw std::invalid_argument("--validate must be non-negative");
    options.validate = static_cast<std::size_t>(*c.validate);
  }
  options.threads = c.threads;
  const SpectralWindow w = window_of(c, 15);
  const TransformMatrix M = build_transform(bp, b, params, w, c.tol, options);
  auto entry = [&](int rp, int r) { return c.matrix == "F" ? M.F(rp, r) : M.T(rp, r); };
  if (c.format == Format::Csv) {
    std::ostringstream os;
    os << "r_prime,r,re,im\n";
    for (int rp = w.r_min; rp <= w.r_max; ++rp)
      for (int r = w.r_min; r <= w.r_max; ++r)
        os << rp << ',' << r << ',' << num(entry(rp, r).real()) << ',' << num(entry(rp, r).imag()) << '\n';
    return {os.str()};
  }
  json doc = header(c);
  doc["b"] = b;
  doc["b_prime"] = bp;
  doc["matrix"] = c.matrix;
  doc["window"] = {w.r_min, w.r_max};
  doc["validation"] = {{"entries", M.validated_entries}, {"max_discrepancy", M.validation_discrepancy}};
  doc["max_column_deviation"] = M.max_column_deviation();
  doc["max_row_deviation"] = M.max_row_deviation();
  json entries = json::array();
  for (int rp = w.r_min; rp <= w.r_max; ++rp)
    for (int r = w.r_min; r <= w.r_max; ++r)
      entries.push_back({{"r_prime", rp}, {"r", r}, {"re", entry(rp, r).real()}, {"im", entry(rp, r).imag()}});
  doc["entries"] = std::move(entries);
  return as_json(doc);
}

Emitted locate(const CliConfig& c, const QParameters& params) {
  const double x0 = require(c.x, "--x0");
  const Extension e = locate_extension(x0, params, c.kind);
  ExtremalMeasure m(params, e.b, c.kind, c.tol);
  json doc = header(c);
  doc["b"] = e.b;
  doc["r"] = e.r;
  doc["x0_roundtrip"] = spectrum_point(m, e.r);
  return as_json(doc);
}

Emitted verdict(const CliConfig& c, const QParameters& params) {
  JacobiOperator J;
  if (c.op == "position") J = position_jacobi(params);
  else if (c.op == "momentum") J = momentum_jacobi(params);
  else if (c.op == "undeformed") J = undeformed_jacobi();
  else throw std::invalid_argument("--operator must be position, momentum or undeformed");
  const int probe = c.n_probe.value_or(64);
  if (probe < 32) throw std::invalid_argument("--nprobe must be at least 32");
  const SelfAdjointnessVerdict v = self_adjointness_verdict(J, static_cast<std::size_t>(probe), c.tol);
  const VerdictEvidence& ev = v.evidence;
  json doc = header(c);
  doc["operator"] = J.label;
  doc["verdict"] = to_string(v.verdict);
  json evidence = {
      {"n_probe", ev.n_probe},
      {"first_quartile_max", number(ev.first_quartile_max)},
      {"last_quartile_max", number(ev.last_quartile_max)},
      {"increment_contraction", number(ev.increment_contraction)},
      {"sup_bound", number(ev.sup_bound)},
      {"block_ratio", number(ev.block_ratio)},
      {"tail_ratio", number(ev.tail_ratio)},
      {"tail_bound", number(ev.tail_bound)},
      {"diagonal_bounded", ev.diagonal_bounded},
  };
  evidence["log_convex_from"] = ev.log_convex_from ? json(*ev.log_convex_from) : json(nullptr);
  evidence["reciprocal_sum"] = ev.reciprocal_partial_sums.empty()
                                   ? json(0.0)
                                   : number(ev.reciprocal_partial_sums.back());
  doc["evidence"] = std::move(evidence);
  return as_json(doc);
}

Emitted verify(const CliConfig& c, const QParameters& params) {
  VerifyContext ctx{params, require(c.b, "--b"), c.b_prime, c.tol};
  ExtremalMeasure(params, ctx.b, Kind::Position, c.tol);
  if (ctx.b_prime) ExtremalMeasure(params, *ctx.b_prime, Kind::Position, c.tol);
  const std::vector<CheckResult> results = run_verification(ctx);
  bool all = true;
  for (const CheckResult& r : results) all = all && !r.errored && r.outcome.pass();
  const int code = all ? kOk : kFailure;
  if (c.format == Format::Csv) {
    std::ostringstream os;
    os << "name,deviation,tolerance,pass\n";
    for (const CheckResult& r : results)
      os << r.name << ',' << num(r.outcome.measured) << ',' << num(r.outcome.tolerance) << ','
         << (r.outcome.pass() && !r.errored ? "true" : "false") << '\n';
    return {os.str(), code};
  }
  json doc = header(c);
  doc["b"] = ctx.b;
  doc["b_prime"] = ctx.b_prime ? json(*ctx.b_prime) : json(nullptr);
  json checks = json::array();
  for (const CheckResult& r : results) {
    json item = {{"name", r.name},
                 {"deviation", number(r.outcome.measured)},
                 {"tolerance", r.outcome.tolerance},
                 {"pass", r.outcome.pass() && !r.errored}};
    item[r.errored ? "error" : "detail"] = r.outcome.detail;
    checks.push_back(std::move(item));
  }
  doc["checks"] = std::move(checks);
  doc["pass"] = all;
  return as_json(doc, code);
}

QParameters parameters_for(const CliConfig& c) {
  if (c.command == Command::Verdict) return QParameters::relaxed(c.q);
  if (!(c.q > 1.0)) throw std::invalid_argument("q > 1 is required for this command");
  return QParameters::oscillator(c.q);
}

Emitted dispatch(const CliConfig& c) {
  c.tol.validate();
  const QParameters params = parameters_for(c);
  switch (c.command) {
    case Command::Spectrum: return spectrum(c, params);
    case Command::Hamiltonian: return hamiltonian(c, params);
    case Command::Polys: return polys(c, params);
    case Command::Eigenfunction: return eigenfunction(c, params);
    case Command::Transform: return transform(c, params);
    case Command::Locate: return locate(c, params);
    case Command::Verdict: return verdict(c, params);
    case Command::Verify: return verify(c, params);
  }
  throw std::logic_error("unknown command");
}

void error_document(std::ostream& err, const CliConfig& c, const char* kind, const std::string& what) {
  json doc = header(c);
  doc["error"] = {{"kind", kind}, {"message", what}};
  err << doc.dump(2) << '\n';
}

double env_double(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0') throw std::invalid_argument(std::string("malformed ") + name);
  return v;
}

}  // namespace

Tolerance default_tolerance() {
  Tolerance t;
  t.rel_tol = env_double("QOSC_REL_TOL", t.rel_tol);
  t.tail_eps = env_double("QOSC_TAIL_EPS", t.tail_eps);
  t.max_terms = static_cast<int>(env_double("QOSC_MAX_TERMS", t.max_terms));
  return t;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  Emitted emitted;
  try {
    emitted = dispatch(config);
  } catch (const NonConvergence& e) {
    error_document(err, config, "non_convergence", e.what());
    return kFailure;
  } catch (const WindowTooSmall& e) {
    error_document(err, config, "window_too_small", e.what());
    return kFailure;
  } catch (const ValidationFailure& e) {
    error_document(err, config, "validation_failure", e.what());
    return kFailure;
  } catch (const std::invalid_argument& e) {
    error_document(err, config, "invalid_argument", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    error_document(err, config, "numeric_error", e.what());
    return kFailure;
  }
  if (config.output) {
    std::ofstream file(*config.output, std::ios::binary);
    if (!file) {
      error_document(err, config, "io_error", "cannot open " + *config.output);
      return kFailure;
    }
    file << emitted.text;
  } else {
    out << emitted.text;
  }
  return emitted.code;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CliConfig config;
  try {
    config.tol = default_tolerance();
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"q-oscillator spectra, eigenfunctions and q-Fourier transforms"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string kind = "position";
  std::optional<int> rmin, rmax;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", config.q, "deformation parameter")->required();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", config.output, "write the document to a file");
    sub->add_option("--rel-tol", config.tol.rel_tol);
    sub->add_option("--tail-eps", config.tol.tail_eps);
    sub->add_option("--max-terms", config.tol.max_terms);
  };
  auto windowed = [&](CLI::App* sub) {
    sub->add_option("--rmin", rmin);
    sub->add_option("--rmax", rmax);
  };
  auto kinded = [&](CLI::App* sub) {
    sub->add_option("--kind", kind, "position or momentum")
        ->check(CLI::IsMember({"position", "momentum"}));
  };

  std::map<CLI::App*, Command> subs;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    subs[sub] = kCommands.at(name);
    return sub;
  };

  CLI::App* s = add("spectrum", "spectral points and weights of one extension");
  s->add_option("--b", config.b)->required();
  s->add_option("--state", config.state, "Fock level exported in CSV grids")->check(CLI::NonNegativeNumber);
  windowed(s);
  kinded(s);

  CLI::App* h = add("hamiltonian", "energy levels");
  h->add_option("--nmax", config.n_max);

  CLI::App* p = add("polys", "coefficient families P_n or P~_n");
  p->add_option("--x", config.x)->required();
  p->add_option("--nmax", config.n_max);
  kinded(p);

  CLI::App* e = add("eigenfunction", "generalized eigenfunction, product vs series");
  e->add_option("--x", config.x)->required();
  e->add_option("--y", config.y)->required();
  e->add_option("--nmax", config.n_max);
  kinded(e);

  CLI::App* t = add("transform", "windowed q-Fourier transform matrix");
  t->add_option("--b", config.b)->required();
  t->add_option("--bprime", config.b_prime);
  t->add_option("--validate", config.validate, "number of series spot checks");
  t->add_option("--threads", config.threads);
  t->add_option("--matrix", config.matrix, "F or T");
  windowed(t);

  CLI::App* l = add("locate", "extension and index carrying a given point");
  l->add_option("--x0", config.x)->required();

  CLI::App* v = add("verdict", "self-adjointness verdict for a Jacobi operator");
  v->add_option("--operator", config.op);
  v->add_option("--nprobe", config.n_probe);

  CLI::App* f = add("verify", "run the invariant checks");
  f->add_option("--b", config.b)->required();
  f->add_option("--bprime", config.b_prime);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    for (CLI::App* sub : app.get_subcommands()) out << sub->help();
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << ex.what() << '\n';
    return kUsage;
  }

  for (const auto& [sub, command] : subs)
    if (sub->parsed()) config.command = command;
  config.format = format == "csv" ? Format::Csv : Format::Json;
  config.kind = kind == "momentum" ? Kind::Momentum : Kind::Position;
  if (rmin || rmax) {
    const int radius = config.command == Command::Transform ? 15 : 10;
    config.window = std::make_pair(rmin.value_or(-radius), rmax.value_or(radius));
  }
  return run(config, out, err);
}

}  // namespace qosc::cli
