#ifndef RIS_SEISMIC_HPP
#define RIS_SEISMIC_HPP

#include <cstddef>
#include <span>

#include "ris/bouc_wen.hpp"
#include "ris/excitation.hpp"
#include "ris/problem.hpp"

namespace ris {

/// b - max_t |u(t)| for the oscillator driven by the excitation built from x.
double seismic_lsf(std::span<const double> x, double threshold, const BoucWenParams& params,
                   const ExcitationModel& model, std::size_t substeps = 1);

/// Problem over the model's Gaussian variables at threshold b (metres).
ReliabilityProblem make_seismic_problem(double threshold, const BoucWenParams& params, ExcitationModel model,
                                        std::size_t substeps = 1);

}  // namespace ris

#endif  // RIS_SEISMIC_HPP
