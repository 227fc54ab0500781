#pragma once

// File formats. Numbers are written as IEEE-754 doubles with 17 significant
// digits so that every value round-trips exactly.
//
//   density JSON : { "dim": d, "tail_mass": t, "re": [d*d row-major], "im": [d*d row-major] }
//   ket JSON     : { "dim": d, "tail_mass": t, "amps_re": [d], "amps_im": [d] }
//   tail_mass is optional on input and defaults to 0.
//   quadrature   : CSV "theta,x"
//   Wigner grid  : CSV "x,p,w", row-major over xs then ps
//   marginal     : CSV "theta,x,pdf"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "catcoh/experiment.hpp"
#include "catcoh/fock.hpp"
#include "catcoh/measures.hpp"
#include "catcoh/tomography.hpp"
#include "catcoh/wigner.hpp"

namespace catcoh::io {

std::string format_double(double v);

std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);
std::string ket_to_json(const FockKet& ket);
FockKet ket_from_json(const std::string& text);

std::string coherence_to_json(const CoherenceReport& report);
std::string tomo_sidecar_to_json(const TomoResult& result);
std::string pipeline_report_to_json(const PipelineReport& report);

void write_quadrature_csv(std::ostream& out, const QuadratureRecord& record);
QuadratureRecord read_quadrature_csv(std::istream& in);

void write_wigner_csv(std::ostream& out, const WignerGrid& grid);
void write_marginal_csv(std::ostream& out, std::span<const double> thetas,
                        std::span<const double> xs, const DensityMatrix& rho);

void write_fig4_csv(std::ostream& out, const std::vector<Fig4Row>& rows);
void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows, int dim_lo = 12,
                    int dim_hi = 16);

// Whole-file helpers; throw IoError on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace catcoh::io
