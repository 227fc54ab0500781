#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <unistd.h>

#include "catcoh/catcoh.h"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct StateDeleter {
  void operator()(catcoh_state* s) const { catcoh_state_free(s); }
};
using StatePtr = std::unique_ptr<catcoh_state, StateDeleter>;

StatePtr odd_cat(double alpha, int dim = 12) {
  catcoh_state* s = nullptr;
  EXPECT_EQ(catcoh_state_cat(alpha, CATCOH_ODD, dim, &s, nullptr), CATCOH_OK);
  return StatePtr(s);
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("catcoh_capi_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(catcoh_version(), "0.1.0");
  EXPECT_STREQ(catcoh_status_string(CATCOH_OK), "ok");
  EXPECT_NE(std::string(catcoh_status_string(CATCOH_ERR_IO)).size(), 0u);
}

TEST(CApi, CatStateElements) {
  catcoh_state* raw = nullptr;
  double tail = -1.0;
  ASSERT_EQ(catcoh_state_cat(1.06, CATCOH_ODD, 12, &raw, &tail), CATCOH_OK);
  StatePtr s(raw);
  EXPECT_EQ(catcoh_state_dim(s.get()), 12);
  auto c = oracle::cat_amplitudes(1.06, true, 12);
  double re = 0.0, im = 0.0;
  ASSERT_EQ(catcoh_state_element(s.get(), 1, 3, &re, &im), CATCOH_OK);
  EXPECT_NEAR(re, c[1] * c[3], 1e-12);
  EXPECT_EQ(im, 0.0);
  EXPECT_NEAR(tail, oracle::cat_tail(1.06, true, 12), 1e-15);
  double purity = 0.0;
  ASSERT_EQ(catcoh_state_purity(s.get(), &purity), CATCOH_OK);
  EXPECT_NEAR(purity, 1.0, 1e-12);
}

TEST(CApi, ErrorsAreReported) {
  catcoh_state* s = nullptr;
  EXPECT_EQ(catcoh_state_cat(0.0, CATCOH_ODD, 12, &s, nullptr), CATCOH_ERR_DOMAIN);
  EXPECT_EQ(s, nullptr);
  EXPECT_NE(std::string(catcoh_last_error()).size(), 0u);

  catcoh_state* vac = nullptr;
  ASSERT_EQ(catcoh_state_number(0, 12, &vac), CATCOH_OK);
  StatePtr v(vac);
  catcoh_state* sub = nullptr;
  EXPECT_EQ(catcoh_photon_subtract(v.get(), &sub), CATCOH_ERR_DOMAIN);
  EXPECT_STREQ(catcoh_last_error(), "zero subtraction probability");

  EXPECT_EQ(catcoh_state_number(12, 12, &s), CATCOH_ERR_DOMAIN);
  EXPECT_EQ(catcoh_state_coherent(1.0, 12, nullptr, nullptr), CATCOH_ERR_ARGUMENT);
  double out = 0.0;
  EXPECT_EQ(catcoh_rel_entropy_coherence(nullptr, &out), CATCOH_ERR_ARGUMENT);
  EXPECT_EQ(catcoh_loss_channel(v.get(), 1.5, &s), CATCOH_ERR_DOMAIN);
  EXPECT_EQ(catcoh_state_load_json("/nonexistent/x.json", &s), CATCOH_ERR_IO);
}

TEST(CApi, FromElementsValidates) {
  std::vector<double> re{0.5, 0.0, 0.0, 0.5}, im(4, 0.0);
  catcoh_state* s = nullptr;
  ASSERT_EQ(catcoh_state_from_elements(2, re.data(), im.data(), &s), CATCOH_OK);
  StatePtr p(s);
  double h = 0.0;
  ASSERT_EQ(catcoh_von_neumann_entropy(p.get(), &h), CATCOH_OK);
  EXPECT_NEAR(h, 1.0, 1e-12);
  re[0] = 0.9;
  EXPECT_EQ(catcoh_state_from_elements(2, re.data(), im.data(), &s), CATCOH_ERR_DOMAIN);
}

TEST(CApi, LossAgainstClosedForm) {
  StatePtr cat = odd_cat(1.06, 32);
  catcoh_state *kraus = nullptr, *closed = nullptr;
  ASSERT_EQ(catcoh_loss_channel(cat.get(), 0.6, &kraus), CATCOH_OK);
  ASSERT_EQ(catcoh_cat_loss_analytic(1.06, CATCOH_ODD, 0.6, 32, &closed), CATCOH_OK);
  StatePtr a(kraus), b(closed);
  double td = 1.0;
  ASSERT_EQ(catcoh_state_trace_distance(a.get(), b.get(), &td), CATCOH_OK);
  EXPECT_LT(td, 1e-10);
  double p = 0.0;
  ASSERT_EQ(catcoh_conversion_probability(1.06, CATCOH_ODD, 0.6, &p), CATCOH_OK);
  EXPECT_NEAR(p, oracle::flip_probability(1.06, true, 0.6), 1e-13);
}

TEST(CApi, Measures) {
  StatePtr cat = odd_cat(1.06);
  catcoh_coherence rep{};
  ASSERT_EQ(catcoh_coherence_report(cat.get(), &rep), CATCOH_OK);
  EXPECT_NEAR(rep.c_rel_ent, 0.7496844164235889, 1e-9);
  EXPECT_NEAR(rep.c_l1, 1.083145714264869, 1e-9);
  EXPECT_EQ(rep.dim, 12);
  char* json = nullptr;
  ASSERT_EQ(catcoh_coherence_to_json(&rep, &json), CATCOH_OK);
  EXPECT_NE(std::string(json).find("\"c_rel_ent\""), std::string::npos);
  catcoh_string_free(json);

  double v = 0.0;
  ASSERT_EQ(catcoh_cat_rel_entropy_truncated(1.06, CATCOH_ODD, 12, &v), CATCOH_OK);
  EXPECT_NEAR(v, rep.c_rel_ent, 1e-12);
  ASSERT_EQ(catcoh_fidelity_loss_analytic(1.06, 0.5, &v), CATCOH_OK);
  EXPECT_NEAR(v, 0.5, 1e-12);
  ASSERT_EQ(catcoh_negativity_analytic(1.06, 1.0, &v), CATCOH_OK);
  EXPECT_NEAR(v, -1.0 / std::numbers::pi, 1e-9);
  ASSERT_EQ(catcoh_fidelity_to_cat(cat.get(), 1.06, CATCOH_ODD, &v), CATCOH_OK);
  EXPECT_NEAR(v, 1.0, 1e-10);
  double alpha = 0.0, fid = 0.0;
  ASSERT_EQ(catcoh_best_fit_cat(cat.get(), CATCOH_ODD, &alpha, &fid), CATCOH_OK);
  EXPECT_NEAR(alpha, 1.06, 1e-4);
  catcoh_coherence lossy{};
  ASSERT_EQ(catcoh_lossy_cat_coherence(1.06, CATCOH_ODD, 0.4, 12, &lossy), CATCOH_OK);
  EXPECT_NEAR(lossy.c_l1, 0.5653925083530531, 1e-12);
}

TEST(CApi, PhaseSpace) {
  StatePtr cat = odd_cat(1.06);
  double w = 0.0;
  ASSERT_EQ(catcoh_wigner_point(cat.get(), 0.0, 0.0, &w), CATCOH_OK);
  EXPECT_NEAR(w, -1.0 / std::numbers::pi, 1e-8);
  ASSERT_EQ(catcoh_wigner_negativity(cat.get(), &w), CATCOH_OK);
  EXPECT_NEAR(w, -0.3183, 1e-4);
  std::vector<double> xs{-1.0, 0.0, 1.0}, vals(9);
  ASSERT_EQ(catcoh_wigner_grid(cat.get(), xs.data(), 3, xs.data(), 3, vals.data()), CATCOH_OK);
  EXPECT_NEAR(vals[4], -1.0 / std::numbers::pi, 1e-8);
  std::vector<double> pdf(3);
  ASSERT_EQ(catcoh_quadrature_marginal(cat.get(), std::numbers::pi / 2, xs.data(), 3, pdf.data()),
            CATCOH_OK);
  EXPECT_NEAR(pdf[1], 0.0, 1e-15);
}

TEST(CApi, FilesRoundTrip) {
  StatePtr cat = odd_cat(1.06);
  fs::path density = temp_path("rho.json"), ket = temp_path("ket.json");
  ASSERT_EQ(catcoh_state_save_json(cat.get(), density.c_str()), CATCOH_OK);
  ASSERT_EQ(catcoh_state_save_ket_json(cat.get(), ket.c_str()), CATCOH_OK);
  catcoh_state* loaded = nullptr;
  ASSERT_EQ(catcoh_state_load_json(density.c_str(), &loaded), CATCOH_OK);
  StatePtr l(loaded);
  double td = 1.0;
  ASSERT_EQ(catcoh_state_trace_distance(cat.get(), l.get(), &td), CATCOH_OK);
  EXPECT_EQ(td, 0.0);

  catcoh_state* mixed = nullptr;
  ASSERT_EQ(catcoh_loss_channel(cat.get(), 0.5, &mixed), CATCOH_OK);
  StatePtr m(mixed);
  EXPECT_EQ(catcoh_state_save_ket_json(m.get(), ket.c_str()), CATCOH_ERR_DOMAIN);

  std::ofstream(density) << "{broken";
  EXPECT_EQ(catcoh_state_load_json(density.c_str(), &loaded), CATCOH_ERR_IO);
  fs::remove(density);
  fs::remove(ket);
}

TEST(CApi, TomographyRoundTrip) {
  StatePtr cat = odd_cat(1.06);
  catcoh_record* rec = nullptr;
  ASSERT_EQ(catcoh_sample_homodyne(cat.get(), 50000, nullptr, 0, 0.8, 7, &rec), CATCOH_OK);
  ASSERT_EQ(catcoh_record_size(rec), 50000u);
  fs::path csv = temp_path("q.csv");
  ASSERT_EQ(catcoh_record_save_csv(rec, csv.c_str()), CATCOH_OK);
  catcoh_record* back = nullptr;
  ASSERT_EQ(catcoh_record_load_csv(csv.c_str(), &back), CATCOH_OK);
  double t1, x1, t2, x2;
  ASSERT_EQ(catcoh_record_sample(rec, 4321, &t1, &x1), CATCOH_OK);
  ASSERT_EQ(catcoh_record_sample(back, 4321, &t2, &x2), CATCOH_OK);
  EXPECT_EQ(t1, t2);
  EXPECT_EQ(x1, x2);
  EXPECT_EQ(catcoh_record_sample(rec, 50000, &t1, &x1), CATCOH_ERR_ARGUMENT);

  catcoh_tomo_config cfg;
  catcoh_tomo_config_default(&cfg);
  EXPECT_EQ(cfg.cutoff, 11);
  EXPECT_EQ(cfg.eta_det, 0.8);
  catcoh_tomo_result* res = nullptr;
  ASSERT_EQ(catcoh_maxlik_reconstruct(back, &cfg, &res), CATCOH_OK);
  catcoh_state* rho_hat = nullptr;
  ASSERT_EQ(catcoh_tomo_result_state(res, &rho_hat), CATCOH_OK);
  StatePtr r(rho_hat);
  double f = 0.0;
  ASSERT_EQ(catcoh_fidelity_to_cat(r.get(), 1.06, CATCOH_ODD, &f), CATCOH_OK);
  EXPECT_GE(f, 0.98);
  EXPECT_GT(catcoh_tomo_result_iterations(res), 0);
  EXPECT_TRUE(std::isfinite(catcoh_tomo_result_loglik(res)));

  fs::path dj = temp_path("hat.json"), side = temp_path("hat.meta.json");
  ASSERT_EQ(catcoh_tomo_result_save(res, dj.c_str(), side.c_str()), CATCOH_OK);
  std::ifstream in(side);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(text.find("\"iterations\""), std::string::npos);
  EXPECT_NE(text.find("\"converged\""), std::string::npos);

  catcoh_tomo_result_free(res);
  catcoh_record_free(rec);
  catcoh_record_free(back);
  for (const auto& p : {csv, dj, side}) fs::remove(p);
}

TEST(CApi, PipelineAndSweeps) {
  catcoh_pipeline_spec spec;
  catcoh_pipeline_spec_default(&spec);
  EXPECT_EQ(spec.squeeze_db, -3.0);
  EXPECT_EQ(spec.prep_loss, 0.2);
  EXPECT_EQ(spec.tap, 0.05);
  EXPECT_EQ(spec.dim, 12);
  catcoh_pipeline_summary sum{};
  ASSERT_EQ(catcoh_pipeline_report(&spec, &sum), CATCOH_OK);
  EXPECT_GT(sum.fidelity, 0.7);
  EXPECT_LT(sum.fidelity, 0.8);
  char* json = nullptr;
  ASSERT_EQ(catcoh_pipeline_report_json(&spec, &json), CATCOH_OK);
  EXPECT_NE(std::string(json).find("\"alpha_fit\""), std::string::npos);
  catcoh_string_free(json);

  std::vector<double> etas{0.5, 1.0};
  fs::path f4 = temp_path("fig4.csv"), f5 = temp_path("fig5.csv");
  ASSERT_EQ(catcoh_write_decoherence_csv(1.06, etas.data(), 2, 12, &spec, f4.c_str()), CATCOH_OK);
  std::vector<double> alphas{0.5, 1.0};
  ASSERT_EQ(catcoh_write_truncation_csv(alphas.data(), 2, 12, 16, f5.c_str()), CATCOH_OK);
  std::ifstream in(f4);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "eta,c_rel_ideal,c_l1_ideal,f_ideal,neg_ideal,c_rel_model,c_l1_model,f_model,neg_model");
  fs::remove(f4);
  fs::remove(f5);
}
