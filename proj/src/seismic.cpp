#include "ris/seismic.hpp"

#include <memory>

#include "ris/errors.hpp"

namespace ris {

double seismic_lsf(std::span<const double> x, double threshold, const BoucWenParams& params,
                   const ExcitationModel& model, std::size_t substeps) {
  if (!(threshold > 0.0)) throw DomainError("seismic_lsf: threshold must be positive");
  const std::vector<double> ground = build_excitation(x, model);
  return threshold - peak_displacement(params, ground, model.dt, substeps);
}

ReliabilityProblem make_seismic_problem(double threshold, const BoucWenParams& params, ExcitationModel model,
                                        std::size_t substeps) {
  if (!(threshold > 0.0)) throw ConfigError("seismic problem: threshold must be positive");
  params.validate();
  if (model.kind == ExcitationKind::spectral_white_noise && !model.synthesizer) {
    model.synthesizer =
        std::make_shared<const SpectralSynthesizer>(model.n_vars, model.s0, model.omega_max, model.duration, model.dt);
  }
  const std::size_t n = model.kind == ExcitationKind::spectral_white_noise ? model.n_vars : 2;
  auto shared = std::make_shared<const ExcitationModel>(std::move(model));
  return ReliabilityProblem("seismic", n, [threshold, params, shared, substeps](std::span<const double> x) {
    return seismic_lsf(x, threshold, params, *shared, substeps);
  });
}

}  // namespace ris
