#include "catcoh/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace catcoh::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> number_array(const json& doc, const char* key, std::size_t expected) {
  if (!doc.contains(key) || !doc[key].is_array()) throw IoError(std::string("missing array '") + key + "'");
  const json& arr = doc[key];
  if (arr.size() != expected)
    throw IoError(std::string("array '") + key + "' has " + std::to_string(arr.size()) +
                  " entries, expected " + std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_number()) throw IoError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

int read_dim(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer())
    throw IoError("missing integer 'dim'");
  int d = doc["dim"].get<int>();
  if (d < 2 || d > 4096) throw IoError("'dim' out of range");
  return d;
}

double read_tail(const json& doc) {
  if (!doc.contains("tail_mass")) return 0.0;
  const json& t = doc["tail_mass"];
  if (!t.is_number()) throw IoError("'tail_mass' must be a number");
  double v = t.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw IoError("'tail_mass' out of range");
  return v;
}

void write_array(std::ostringstream& os, const std::vector<double>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_double(v[i]);
  os << ']';
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (trim(field.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw IoError("line " + std::to_string(line) + ": not a number: '" + field + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string density_to_json(const DensityMatrix& rho) {
  const int d = rho.dim();
  std::vector<double> re, im;
  re.reserve(d * d);
  im.reserve(d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      re.push_back(rho(m, n).real());
      im.push_back(rho(m, n).imag());
    }
  std::ostringstream os;
  os << "{\n  \"dim\": " << d << ",\n  \"tail_mass\": " << format_double(rho.tail_mass())
     << ",\n  \"re\": ";
  write_array(os, re);
  os << ",\n  \"im\": ";
  write_array(os, im);
  os << "\n}\n";
  return os.str();
}

DensityMatrix density_from_json(const std::string& text) {
  json doc = parse(text);
  const int d = read_dim(doc);
  auto re = number_array(doc, "re", static_cast<std::size_t>(d) * d);
  auto im = number_array(doc, "im", static_cast<std::size_t>(d) * d);
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(re[i * d + j], im[i * d + j]);
  return DensityMatrix(m, read_tail(doc));
}

std::string ket_to_json(const FockKet& ket) {
  std::vector<double> re, im;
  for (int n = 0; n < ket.dim(); ++n) {
    re.push_back(ket[n].real());
    im.push_back(ket[n].imag());
  }
  std::ostringstream os;
  os << "{\n  \"dim\": " << ket.dim() << ",\n  \"tail_mass\": " << format_double(ket.tail_mass())
     << ",\n  \"amps_re\": ";
  write_array(os, re);
  os << ",\n  \"amps_im\": ";
  write_array(os, im);
  os << "\n}\n";
  return os.str();
}

FockKet ket_from_json(const std::string& text) {
  json doc = parse(text);
  const int d = read_dim(doc);
  auto re = number_array(doc, "amps_re", d);
  auto im = number_array(doc, "amps_im", d);
  ComplexVector amps(d);
  for (int n = 0; n < d; ++n) amps(n) = Complex(re[n], im[n]);
  return FockKet(amps, read_tail(doc));
}

std::string coherence_to_json(const CoherenceReport& r) {
  std::ostringstream os;
  os << "{\"c_rel_ent\": " << format_double(r.c_rel_ent) << ", \"c_l1\": " << format_double(r.c_l1)
     << ", \"dim\": " << r.dim << "}\n";
  return os.str();
}

std::string tomo_sidecar_to_json(const TomoResult& result) {
  std::ostringstream os;
  os << "{\n  \"iterations\": " << result.iterations
     << ",\n  \"final_loglik\": " << format_double(result.final_loglik)
     << ",\n  \"converged\": " << (result.converged ? "true" : "false")
     << ",\n  \"samples_used\": " << result.samples_used
     << ",\n  \"samples_dropped\": " << result.samples_dropped << "\n}\n";
  return os.str();
}

std::string pipeline_report_to_json(const PipelineReport& r) {
  std::ostringstream os;
  os << "{\n  \"squeeze_db\": " << format_double(r.spec.squeeze_db)
     << ",\n  \"prep_loss\": " << format_double(r.spec.prep_loss)
     << ",\n  \"tap\": " << format_double(r.spec.tap) << ",\n  \"dim\": " << r.spec.dim
     << ",\n  \"alpha_fit\": " << format_double(r.fit.alpha)
     << ",\n  \"fidelity\": " << format_double(r.fit.fidelity)
     << ",\n  \"c_rel_ent\": " << format_double(r.coherence.c_rel_ent)
     << ",\n  \"c_l1\": " << format_double(r.coherence.c_l1)
     << ",\n  \"wigner_min\": " << format_double(r.wigner_min)
     << ",\n  \"mean_photon_number\": " << format_double(r.mean_photon_number) << "\n}\n";
  return os.str();
}

void write_quadrature_csv(std::ostream& out, const QuadratureRecord& record) {
  out << "theta,x\n";
  for (const auto& s : record.samples) out << format_double(s.theta) << ',' << format_double(s.x) << '\n';
}

QuadratureRecord read_quadrature_csv(std::istream& in) {
  QuadratureRecord record;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (t != "theta,x") throw IoError("quadrature CSV must start with header 'theta,x'");
      continue;
    }
    auto comma = t.find(',');
    if (comma == std::string::npos) throw IoError("line " + std::to_string(line_no) + ": expected two fields");
    record.samples.push_back({parse_number(t.substr(0, comma), line_no),
                              parse_number(t.substr(comma + 1), line_no)});
  }
  if (record.samples.empty()) throw IoError("quadrature CSV has no samples");
  try {
    record.validate();
  } catch (const DomainError& e) {
    throw IoError(e.what());
  }
  record.source_note = "csv";
  return record;
}

void write_wigner_csv(std::ostream& out, const WignerGrid& grid) {
  out << "x,p,w\n";
  for (std::size_t i = 0; i < grid.xs.size(); ++i)
    for (std::size_t j = 0; j < grid.ps.size(); ++j)
      out << format_double(grid.xs[i]) << ',' << format_double(grid.ps[j]) << ','
          << format_double(grid.at(i, j)) << '\n';
}

void write_marginal_csv(std::ostream& out, std::span<const double> thetas,
                        std::span<const double> xs, const DensityMatrix& rho) {
  out << "theta,x,pdf\n";
  for (double th : thetas) {
    auto pdf = quadrature_marginal(rho, th, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << format_double(th) << ',' << format_double(xs[i]) << ',' << format_double(pdf[i]) << '\n';
  }
}

void write_fig4_csv(std::ostream& out, const std::vector<Fig4Row>& rows) {
  const bool model = !rows.empty() && rows.front().model.has_value();
  out << "eta,c_rel_ideal,c_l1_ideal,f_ideal,neg_ideal";
  if (model) out << ",c_rel_model,c_l1_model,f_model,neg_model";
  out << '\n';
  for (const auto& r : rows) {
    out << format_double(r.eta) << ',' << format_double(r.ideal.c_rel_ent) << ','
        << format_double(r.ideal.c_l1) << ',' << format_double(r.ideal.fidelity) << ','
        << format_double(r.ideal.negativity);
    if (model)
      out << ',' << format_double(r.model->c_rel_ent) << ',' << format_double(r.model->c_l1) << ','
          << format_double(r.model->fidelity) << ',' << format_double(r.model->negativity);
    out << '\n';
  }
}

void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows, int dim_lo, int dim_hi) {
  out << "alpha,c_rel_d" << dim_lo << ",c_rel_d" << dim_hi << ",c_l1_d" << dim_lo << ",c_l1_d"
      << dim_hi << '\n';
  for (const auto& r : rows)
    out << format_double(r.alpha) << ',' << format_double(r.c_rel_lo) << ','
        << format_double(r.c_rel_hi) << ',' << format_double(r.c_l1_lo) << ','
        << format_double(r.c_l1_hi) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace catcoh::io
