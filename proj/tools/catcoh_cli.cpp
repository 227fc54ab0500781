// catcoh command-line tool. Talks to the library only through catcoh.h.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catcoh/catcoh.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exit codes
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;
constexpr int kExitOther = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(catcoh_status s) {
  switch (s) {
    case CATCOH_OK: return kExitOk;
    case CATCOH_ERR_DOMAIN: return kExitDomain;
    case CATCOH_ERR_IO: return kExitIo;
    default: return kExitOther;
  }
}

void check(catcoh_status s) {
  if (s != CATCOH_OK) throw Failure{exit_code(s), catcoh_last_error()};
}

struct StateFree {
  void operator()(catcoh_state* s) const { catcoh_state_free(s); }
};
using State = std::unique_ptr<catcoh_state, StateFree>;

struct RecordFree {
  void operator()(catcoh_record* r) const { catcoh_record_free(r); }
};
using Record = std::unique_ptr<catcoh_record, RecordFree>;

struct ResultFree {
  void operator()(catcoh_tomo_result* r) const { catcoh_tomo_result_free(r); }
};
using Result = std::unique_ptr<catcoh_tomo_result, ResultFree>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

int default_dim() {
  const char* env = std::getenv("CATCOH_DEFAULT_DIM");
  if (!env || !*env) return CATCOH_DEFAULT_DIM;
  char* end = nullptr;
  long d = std::strtol(env, &end, 10);
  if (*end != '\0' || d < 2 || d > 4096)
    throw Failure{kExitDomain, std::string("CATCOH_DEFAULT_DIM must be an integer >= 2, got '") + env + "'"};
  return static_cast<int>(d);
}

catcoh_parity parse_parity(const std::string& s) {
  if (s == "odd") return CATCOH_ODD;
  if (s == "even") return CATCOH_EVEN;
  throw Failure{kExitDomain, "parity must be 'even' or 'odd', got '" + s + "'"};
}

State load_state(const std::string& path) {
  catcoh_state* s = nullptr;
  check(catcoh_state_load_json(path.c_str(), &s));
  return State(s);
}

std::vector<double> grid(double lo, double hi, int n) {
  if (n < 1) throw Failure{kExitDomain, "grid needs at least one point"};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

// ---- state ----------------------------------------------------------------

struct StateArgs {
  std::string kind;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string parity = "odd";
  std::optional<int> dim;
  std::optional<double> r;
  std::optional<double> squeeze_db;
  double prep_loss = 0.2;
  double tap = 0.05;
  std::string out = "state.json";
  std::string ket_out;
};

int run_state(const StateArgs& a) {
  const int dim = a.dim.value_or(default_dim());
  catcoh_state* raw = nullptr;
  double tail = 0.0;
  if (a.kind == "coherent" || a.kind == "cat") {
    if (std::isnan(a.alpha)) throw Failure{kExitDomain, "--alpha is required for " + a.kind};
    if (a.kind == "coherent")
      check(catcoh_state_coherent(a.alpha, dim, &raw, &tail));
    else
      check(catcoh_state_cat(a.alpha, parse_parity(a.parity), dim, &raw, &tail));
  } else if (a.kind == "squeezed") {
    if (a.r && a.squeeze_db) throw Failure{kExitDomain, "give either --r or --squeeze-db, not both"};
    // e^{-2r} = 10^{db/10}
    double r = a.r ? *a.r : std::abs(a.squeeze_db.value_or(-3.0)) * std::log(10.0) / 20.0;
    check(catcoh_state_squeezed_vacuum(r, dim, &raw, &tail));
  } else if (a.kind == "pipeline") {
    catcoh_pipeline_spec spec;
    catcoh_pipeline_spec_default(&spec);
    spec.squeeze_db = a.squeeze_db.value_or(spec.squeeze_db);
    spec.prep_loss = a.prep_loss;
    spec.tap = a.tap;
    spec.dim = dim;
    // truncation of the squeezed source
    catcoh_state* src = nullptr;
    check(catcoh_state_squeezed_vacuum(std::abs(spec.squeeze_db) * std::log(10.0) / 20.0, dim, &src, &tail));
    catcoh_state_free(src);
    check(catcoh_pipeline_state(&spec, &raw));
  } else {
    throw Failure{kExitDomain, "unknown state kind '" + a.kind + "'"};
  }
  State state(raw);
  check(catcoh_state_save_json(state.get(), a.out.c_str()));
  if (!a.ket_out.empty()) check(catcoh_state_save_ket_json(state.get(), a.ket_out.c_str()));

  const bool under = tail > CATCOH_TRUNCATION_THRESHOLD;
  if (under)
    std::cerr << "warning: tail mass exceeds 1e-3 (" << num(tail) << " beyond |" << dim - 1
              << ">); increase --dim\n";
  double purity = 0.0, mean_n = 0.0;
  check(catcoh_state_purity(state.get(), &purity));
  check(catcoh_state_mean_photon_number(state.get(), &mean_n));
  std::cout << "{\"kind\": " << quoted(a.kind) << ", \"dim\": " << dim << ", \"tail_mass\": " << num(tail)
            << ", \"under_truncated\": " << (under ? "true" : "false") << ", \"purity\": " << num(purity)
            << ", \"mean_photon_number\": " << num(mean_n) << ", \"out\": " << quoted(a.out) << "}\n";
  return kExitOk;
}

// ---- channel --------------------------------------------------------------

int run_channel(const std::string& in, double eta, const std::string& out) {
  State state = load_state(in);
  catcoh_state* raw = nullptr;
  check(catcoh_loss_channel(state.get(), eta, &raw));
  State lossy(raw);
  check(catcoh_state_save_json(lossy.get(), out.c_str()));
  return kExitOk;
}

// ---- measure --------------------------------------------------------------

struct MeasureArgs {
  std::string in;
  std::vector<std::string> fields{"c_rel_ent", "c_l1", "negativity", "fidelity"};
  std::optional<double> alpha_ref;
  std::string parity = "odd";
};

int run_measure(const MeasureArgs& a) {
  State state = load_state(a.in);
  const catcoh_parity parity = parse_parity(a.parity);
  std::ostringstream os;
  os << "{";
  bool first = true;
  auto emit = [&](const std::string& key, const std::string& value) {
    os << (first ? "" : ", ") << quoted(key) << ": " << value;
    first = false;
  };
  catcoh_coherence report{};
  check(catcoh_coherence_report(state.get(), &report));
  for (const auto& f : a.fields) {
    double v = 0.0;
    if (f == "c_rel_ent") {
      emit(f, num(report.c_rel_ent));
    } else if (f == "c_l1") {
      emit(f, num(report.c_l1));
    } else if (f == "negativity") {
      check(catcoh_wigner_negativity(state.get(), &v));
      emit(f, num(v));
    } else if (f == "fidelity") {
      double alpha = 0.0;
      if (a.alpha_ref) {
        alpha = *a.alpha_ref;
        check(catcoh_fidelity_to_cat(state.get(), alpha, parity, &v));
      } else {
        check(catcoh_best_fit_cat(state.get(), parity, &alpha, &v));
      }
      emit(f, num(v));
      emit("alpha_ref", num(alpha));
    } else if (f == "von_neumann") {
      check(catcoh_von_neumann_entropy(state.get(), &v));
      emit(f, num(v));
    } else if (f == "purity") {
      check(catcoh_state_purity(state.get(), &v));
      emit(f, num(v));
    } else {
      throw Failure{kExitDomain, "unknown measure '" + f + "'"};
    }
  }
  emit("dim", std::to_string(report.dim));
  os << "}\n";
  std::cout << os.str();
  return kExitOk;
}

// ---- wigner / marginal ----------------------------------------------------

int run_wigner(const std::string& in, const std::string& out, double half_width, int points) {
  State state = load_state(in);
  check(catcoh_write_wigner_csv(state.get(), half_width, points, out.c_str()));
  double neg = 0.0;
  check(catcoh_wigner_negativity(state.get(), &neg));
  std::cout << "{\"negativity\": " << num(neg) << ", \"out\": " << quoted(out) << "}\n";
  return kExitOk;
}

int run_marginal(const std::string& in, const std::string& out, const std::vector<double>& thetas,
                 double half_width, int points) {
  State state = load_state(in);
  check(catcoh_write_marginal_csv(state.get(), thetas.data(), thetas.size(), half_width, points,
                                  out.c_str()));
  return kExitOk;
}

// ---- figure sweeps --------------------------------------------------------

struct PipelineArgs {
  double squeeze_db = -3.0;
  double prep_loss = 0.2;
  double tap = 0.05;
};

catcoh_pipeline_spec to_spec(const PipelineArgs& p, int dim) {
  catcoh_pipeline_spec spec;
  catcoh_pipeline_spec_default(&spec);
  spec.squeeze_db = p.squeeze_db;
  spec.prep_loss = p.prep_loss;
  spec.tap = p.tap;
  spec.dim = dim;
  return spec;
}

int run_fig4(double alpha, std::vector<double> etas, int n_etas, std::optional<int> dim, bool pipeline,
             const PipelineArgs& p, const std::string& out) {
  if (etas.empty()) etas = grid(0.0, 1.0, n_etas);
  const int d = dim.value_or(default_dim());
  catcoh_pipeline_spec spec = to_spec(p, d);
  check(catcoh_write_decoherence_csv(alpha, etas.data(), etas.size(), d, pipeline ? &spec : nullptr,
                                     out.c_str()));
  return kExitOk;
}

int run_fig5(std::vector<double> alphas, int n_alphas, double alpha_max, int dim_lo, int dim_hi,
             const std::string& out) {
  if (alphas.empty()) alphas = grid(0.0, alpha_max, n_alphas);
  check(catcoh_write_truncation_csv(alphas.data(), alphas.size(), dim_lo, dim_hi, out.c_str()));
  return kExitOk;
}

// ---- tomography -----------------------------------------------------------

int run_simulate(const std::string& in, std::size_t n, std::uint64_t seed, double eta_det, int phases,
                 const std::string& out) {
  State state = load_state(in);
  if (phases < 1) throw Failure{kExitDomain, "--phases must be at least 1"};
  std::vector<double> thetas(phases);
  for (int k = 0; k < phases; ++k) thetas[k] = k * kPi / phases;
  catcoh_record* raw = nullptr;
  check(catcoh_sample_homodyne(state.get(), n, thetas.data(), thetas.size(), eta_det, seed, &raw));
  Record rec(raw);
  check(catcoh_record_save_csv(rec.get(), out.c_str()));
  return kExitOk;
}

int run_reconstruct(const std::string& in, const std::string& out, std::string meta,
                    const catcoh_tomo_config& cfg) {
  catcoh_record* raw = nullptr;
  check(catcoh_record_load_csv(in.c_str(), &raw));
  Record rec(raw);
  if (meta.empty()) {
    auto dot = out.rfind(".json");
    meta = (dot != std::string::npos && dot + 5 == out.size() ? out.substr(0, dot) : out) + ".meta.json";
  }
  catcoh_tomo_result* res_raw = nullptr;
  check(catcoh_maxlik_reconstruct(rec.get(), &cfg, &res_raw));
  Result res(res_raw);
  check(catcoh_tomo_result_save(res.get(), out.c_str(), meta.c_str()));
  std::cout << "{\"iterations\": " << catcoh_tomo_result_iterations(res.get())
            << ", \"final_loglik\": " << num(catcoh_tomo_result_loglik(res.get()))
            << ", \"converged\": " << (catcoh_tomo_result_converged(res.get()) ? "true" : "false")
            << ", \"out\": " << quoted(out) << ", \"meta\": " << quoted(meta) << "}\n";
  return kExitOk;
}

// ---- pipeline report ------------------------------------------------------

int run_pipeline_report(const PipelineArgs& p, std::optional<int> dim) {
  catcoh_pipeline_spec spec = to_spec(p, dim.value_or(default_dim()));
  char* json = nullptr;
  check(catcoh_pipeline_report_json(&spec, &json));
  std::cout << json;
  catcoh_string_free(json);
  return kExitOk;
}

// ---- plot -----------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitIo, "cannot open '" + path + "' for reading"};
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (t.header.empty()) {
      t.header = fields;
      t.columns.resize(fields.size());
      continue;
    }
    if (fields.size() != t.header.size())
      throw Failure{kExitIo, path + ":" + std::to_string(line_no) + ": wrong number of fields"};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      char* end = nullptr;
      double v = std::strtod(fields[i].c_str(), &end);
      if (end == fields[i].c_str() || *end != '\0')
        throw Failure{kExitIo, path + ":" + std::to_string(line_no) + ": not a number: '" + fields[i] + "'"};
      t.columns[i].push_back(v);
    }
  }
  if (t.header.size() < 2 || t.columns[0].empty())
    throw Failure{kExitIo, "'" + path + "' needs a header and at least one data row with two columns"};
  return t;
}

// Minimal SVG line chart: first column on x, every other column as a series.
std::string svg_chart(const Table& t, const std::string& title) {
  const double w = 640, h = 420, ml = 60, mr = 170, mt = 40, mb = 50;
  const auto& xs = t.columns[0];
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (std::size_t c = 1; c < t.columns.size(); ++c)
    for (double v : t.columns[c]) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n"
     << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr << "\" height=\"" << h - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  char buf[64];
  for (int i = 0; i <= 4; ++i) {
    double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    std::snprintf(buf, sizeof buf, "%.3g", xv);
    os << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18 << "\" font-family=\"sans-serif\" font-size=\"11\" "
       << "text-anchor=\"middle\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", yv);
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4 << "\" font-family=\"sans-serif\" font-size=\"11\" "
       << "text-anchor=\"end\">" << buf << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
     << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << t.header[0] << "</text>\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* color = colors[(c - 1) % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(t.columns[c][i]));
      os << buf;
    }
    os << "\"/>\n";
    double ly = mt + 16.0 * c;
    os << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << w - mr + 36 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << t.header[c] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

int run_plot(const std::string& in, const std::string& out, const std::string& title) {
  Table t = read_csv(in);
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Failure{kExitIo, "cannot open '" + out + "' for writing"};
  f << svg_chart(t, title.empty() ? in : title);
  if (!f) throw Failure{kExitIo, "failed writing '" + out + "'"};
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catcoh: optical cat states, loss, coherence, Wigner functions and homodyne tomography"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(catcoh_version()));

  std::function<int()> action;

  StateArgs sa;
  auto* state = app.add_subcommand("state", "Build a state and write its density matrix JSON");
  state->add_option("kind", sa.kind, "coherent | cat | squeezed | pipeline")
      ->required()
      ->check(CLI::IsMember({"coherent", "cat", "squeezed", "pipeline"}));
  state->add_option("--alpha", sa.alpha, "Coherent or cat amplitude");
  state->add_option("--parity", sa.parity, "Cat parity: even | odd")->capture_default_str();
  state->add_option("--dim", sa.dim, "Fock dimension d (default 12 or CATCOH_DEFAULT_DIM)");
  state->add_option("--r", sa.r, "Squeezing parameter r");
  state->add_option("--squeeze-db", sa.squeeze_db, "Squeezing in dB (sign ignored), default -3");
  state->add_option("--prep-loss", sa.prep_loss, "Pipeline loss before subtraction")->capture_default_str();
  state->add_option("--tap", sa.tap, "Pipeline subtraction tap (metadata)")->capture_default_str();
  state->add_option("-o,--out", sa.out, "Density JSON output")->capture_default_str();
  state->add_option("--ket-out", sa.ket_out, "Also write the ket JSON (pure states)");
  state->callback([&] { action = [&] { return run_state(sa); }; });

  std::string ch_in, ch_out = "lossy.json";
  double ch_eta = 1.0;
  auto* channel = app.add_subcommand("channel", "Apply the pure-loss channel to a density JSON");
  channel->alias("loss");
  channel->add_option("-i,--in", ch_in, "Input density JSON")->required();
  channel->add_option("--eta", ch_eta, "Transmission in [0, 1]")->required();
  channel->add_option("-o,--out", ch_out, "Output density JSON")->capture_default_str();
  channel->callback([&] { action = [&] { return run_channel(ch_in, ch_eta, ch_out); }; });

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Coherence, negativity and cat fidelity as JSON");
  measure->add_option("-i,--in", ma.in, "Input density JSON")->required();
  measure->add_option("--fields", ma.fields, "c_rel_ent,c_l1,negativity,fidelity,von_neumann,purity")
      ->delimiter(',');
  measure->add_option("--alpha-ref", ma.alpha_ref, "Reference cat amplitude (default: best fit)");
  measure->add_option("--parity", ma.parity, "Reference cat parity")->capture_default_str();
  measure->callback([&] { action = [&] { return run_measure(ma); }; });

  std::string wg_in, wg_out = "wigner.csv";
  double wg_half = CATCOH_DEFAULT_GRID_HALF_WIDTH;
  int wg_points = CATCOH_DEFAULT_GRID_POINTS;
  auto* wigner = app.add_subcommand("wigner", "Wigner function on a square grid as CSV x,p,w");
  wigner->add_option("-i,--in", wg_in, "Input density JSON")->required();
  wigner->add_option("-o,--out", wg_out, "Output CSV")->capture_default_str();
  wigner->add_option("--half-width", wg_half, "Grid covers [-h, h]^2")->capture_default_str();
  wigner->add_option("--points", wg_points, "Points per axis")->capture_default_str();
  wigner->callback([&] { action = [&] { return run_wigner(wg_in, wg_out, wg_half, wg_points); }; });

  std::string mg_in, mg_out = "marginal.csv";
  std::vector<double> mg_thetas{0.0, kPi / 2};
  double mg_half = CATCOH_DEFAULT_GRID_HALF_WIDTH;
  int mg_points = CATCOH_DEFAULT_GRID_POINTS;
  auto* marginal = app.add_subcommand("marginal", "Quadrature distributions as CSV theta,x,pdf");
  marginal->add_option("-i,--in", mg_in, "Input density JSON")->required();
  marginal->add_option("-o,--out", mg_out, "Output CSV")->capture_default_str();
  marginal->add_option("--thetas", mg_thetas, "Phases in radians")->delimiter(',');
  marginal->add_option("--half-width", mg_half, "x grid covers [-h, h]")->capture_default_str();
  marginal->add_option("--points", mg_points, "x grid points")->capture_default_str();
  marginal->callback([&] {
    action = [&] { return run_marginal(mg_in, mg_out, mg_thetas, mg_half, mg_points); };
  });

  double f4_alpha = 1.06;
  std::vector<double> f4_etas;
  int f4_n = 101;
  std::optional<int> f4_dim;
  bool f4_pipeline = false;
  PipelineArgs f4_p;
  std::string f4_out = "fig4.csv";
  auto* fig4 = app.add_subcommand("fig4", "Coherence, fidelity and negativity against transmission");
  fig4->add_option("--alpha", f4_alpha, "Ideal odd cat amplitude")->capture_default_str();
  fig4->add_option("--etas", f4_etas, "Explicit transmission values")->delimiter(',');
  fig4->add_option("--n-etas", f4_n, "Uniform grid size over [0, 1]")->capture_default_str();
  fig4->add_option("--dim", f4_dim, "Fock dimension");
  fig4->add_flag("--pipeline", f4_pipeline, "Add model columns from the simulated source");
  fig4->add_option("--squeeze-db", f4_p.squeeze_db, "Source squeezing in dB")->capture_default_str();
  fig4->add_option("--prep-loss", f4_p.prep_loss, "Source loss before subtraction")->capture_default_str();
  fig4->add_option("--tap", f4_p.tap, "Subtraction tap (metadata)")->capture_default_str();
  fig4->add_option("-o,--out", f4_out, "Output CSV")->capture_default_str();
  fig4->callback([&] {
    action = [&] { return run_fig4(f4_alpha, f4_etas, f4_n, f4_dim, f4_pipeline, f4_p, f4_out); };
  });

  std::vector<double> f5_alphas;
  int f5_n = 61, f5_lo = 12, f5_hi = 16;
  double f5_max = 3.0;
  std::string f5_out = "fig5.csv";
  auto* fig5 = app.add_subcommand("fig5", "Odd-cat coherence against amplitude at two truncations");
  fig5->add_option("--alphas", f5_alphas, "Explicit amplitudes in [0, 3]")->delimiter(',');
  fig5->add_option("--n-alphas", f5_n, "Uniform grid size over [0, alpha-max]")->capture_default_str();
  fig5->add_option("--alpha-max", f5_max, "Upper end of the uniform grid")->capture_default_str();
  fig5->add_option("--dim-lo", f5_lo, "Smaller truncation")->capture_default_str();
  fig5->add_option("--dim-hi", f5_hi, "Larger truncation")->capture_default_str();
  fig5->add_option("-o,--out", f5_out, "Output CSV")->capture_default_str();
  fig5->callback([&] { action = [&] { return run_fig5(f5_alphas, f5_n, f5_max, f5_lo, f5_hi, f5_out); }; });

  auto* tomo = app.add_subcommand("tomo", "Homodyne tomography");
  tomo->require_subcommand(1);

  std::string ts_in, ts_out = "quadratures.csv";
  std::size_t ts_n = 50000;
  std::uint64_t ts_seed = 7;
  double ts_eta = 0.8;
  int ts_phases = 12;
  auto* simulate = tomo->add_subcommand("simulate", "Sample quadratures from a density JSON");
  simulate->add_option("-i,--in", ts_in, "Input density JSON")->required();
  simulate->add_option("-n,--n", ts_n, "Number of samples")->capture_default_str();
  simulate->add_option("--seed", ts_seed, "Random seed")->capture_default_str();
  simulate->add_option("--eta-det", ts_eta, "Detection efficiency")->capture_default_str();
  simulate->add_option("--phases", ts_phases, "Uniform phases k pi / K")->capture_default_str();
  simulate->add_option("-o,--out", ts_out, "Output CSV theta,x")->capture_default_str();
  simulate->callback([&] {
    action = [&] { return run_simulate(ts_in, ts_n, ts_seed, ts_eta, ts_phases, ts_out); };
  });

  std::string tr_in, tr_out = "reconstructed.json", tr_meta;
  catcoh_tomo_config cfg;
  catcoh_tomo_config_default(&cfg);
  auto* reconstruct = tomo->add_subcommand("reconstruct", "Maximum-likelihood state from a quadrature CSV");
  reconstruct->add_option("-i,--in", tr_in, "Input CSV theta,x")->required();
  reconstruct->add_option("-o,--out", tr_out, "Output density JSON")->capture_default_str();
  reconstruct->add_option("--meta", tr_meta, "Sidecar JSON (default <out>.meta.json)");
  reconstruct->add_option("--cutoff", cfg.cutoff, "Photon-number cutoff")->capture_default_str();
  reconstruct->add_option("--eta-det", cfg.eta_det, "Detection efficiency")->capture_default_str();
  reconstruct->add_option("--phase-bins", cfg.n_phase_bins, "Phase bins over [0, pi)")->capture_default_str();
  reconstruct->add_option("--x-bins", cfg.n_x_bins, "Quadrature bins")->capture_default_str();
  reconstruct->add_option("--x-min", cfg.x_min, "Lower quadrature edge")->capture_default_str();
  reconstruct->add_option("--x-max", cfg.x_max, "Upper quadrature edge")->capture_default_str();
  reconstruct->add_option("--max-iters", cfg.max_iters, "Iteration cap")->capture_default_str();
  reconstruct->add_option("--tol", cfg.loglik_tol, "Stop when the loglik gain is below this")
      ->capture_default_str();
  reconstruct->callback([&] { action = [&] { return run_reconstruct(tr_in, tr_out, tr_meta, cfg); }; });

  PipelineArgs pr_p;
  std::optional<int> pr_dim;
  auto* report = app.add_subcommand("pipeline-report", "Best-fit cat, coherence and Wigner minimum of the source");
  report->add_option("--squeeze-db", pr_p.squeeze_db, "Squeezing in dB")->capture_default_str();
  report->add_option("--prep-loss", pr_p.prep_loss, "Loss before subtraction")->capture_default_str();
  report->add_option("--tap", pr_p.tap, "Subtraction tap (metadata)")->capture_default_str();
  report->add_option("--dim", pr_dim, "Fock dimension");
  report->callback([&] { action = [&] { return run_pipeline_report(pr_p, pr_dim); }; });

  std::string pl_in, pl_out, pl_title;
  auto* plot = app.add_subcommand("plot", "Render a sweep CSV as an SVG line chart");
  plot->add_option("-i,--in", pl_in, "Input CSV")->required();
  plot->add_option("-o,--out", pl_out, "Output SVG")->required();
  plot->add_option("--title", pl_title, "Chart title");
  plot->callback([&] { action = [&] { return run_plot(pl_in, pl_out, pl_title); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    return action();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
