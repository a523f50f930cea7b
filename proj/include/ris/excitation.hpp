#ifndef RIS_EXCITATION_HPP
#define RIS_EXCITATION_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace ris {

inline constexpr double kGravity = 9.81;  // m/s^2

/// Uniformly sampled acceleration time series (m/s^2).
struct GroundMotionRecord {
  double dt = 0.005;
  std::vector<double> acceleration;

  double pga() const noexcept;
  double duration() const noexcept;
  /// Copy rescaled so that the peak absolute acceleration equals `target_pga`.
  GroundMotionRecord scaled_to_pga(double target_pga) const;
};

/// Reads a two-column (time s, acceleration m/s^2) text file. Blank lines and
/// lines starting with '#' are skipped. Throws ConfigError if the sampling is
/// not uniform or the file cannot be parsed.
GroundMotionRecord read_record(const std::filesystem::path& path);
void write_record(const std::filesystem::path& path, const GroundMotionRecord& record);

/// Knobs for a modulated Kanai-Tajimi filtered noise record.
struct SyntheticRecordSpec {
  double duration = 30.0;
  double dt = 0.005;
  double ground_frequency = 15.0;  // rad/s
  double ground_damping = 0.6;
  double rise_time = 1.5;          // s, quadratic build-up
  double strong_end = 11.0;        // s, end of the stationary phase
  double decay_rate = 0.2;         // 1/s
  double target_pga = 0.05 * kGravity;
};

GroundMotionRecord synthetic_record(std::uint64_t seed, const SyntheticRecordSpec& spec = {});

/// The two bundled synthetic records standing in for a historical N-S/E-W pair.
/// Fixed seeds; 30 s at 0.005 s; PGA 0.05 g each.
const std::vector<GroundMotionRecord>& bundled_records();

class SpectralSynthesizer;

enum class ExcitationKind { two_record, spectral_white_noise, synthetic_record };

struct ExcitationModel {
  ExcitationKind kind = ExcitationKind::synthetic_record;
  std::vector<GroundMotionRecord> records;  // two entries for the record-based kinds
  double s0 = 1.3e-4;                       // m^2/s^3
  double omega_max = 25.0 * 3.14159265358979323846;
  std::size_t n_vars = 2;
  double duration = 30.0;
  double dt = 0.005;
  std::shared_ptr<const SpectralSynthesizer> synthesizer;

  /// Number of ground-motion samples produced per realization.
  std::size_t samples() const noexcept;
};

ExcitationModel make_two_record_model(std::vector<GroundMotionRecord> records);
/// Two-record model over the bundled synthetic records.
ExcitationModel make_synthetic_record_model();
ExcitationModel make_white_noise_model(std::size_t n_vars = 1000, double s0 = 1.3e-4,
                                       double omega_max = 25.0 * 3.14159265358979323846, double duration = 30.0,
                                       double dt = 0.005);

/// x1 * record1 + x2 * record2.
std::vector<double> two_record_excitation(double x1, double x2, const ExcitationModel& model);

/// Spectral representation sum over n/2 frequency pairs; first half of x are
/// cosine amplitudes, second half sine amplitudes.
std::vector<double> spectral_excitation(std::span<const double> x, const ExcitationModel& model);

/// Excitation for the model's kind from a full standard-normal vector.
std::vector<double> build_excitation(std::span<const double> x, const ExcitationModel& model);

/**
 * Evaluates sum_{i=1}^{m} A (X_i cos w_i t_k + Xb_i sin w_i t_k) with
 * w_i = (i - 1/2) dw, A = sqrt(2 S0 dw), at t_k = k dt. When dw dt divides
 * 2 pi the sum is one inverse DFT; otherwise it is accumulated directly.
 */
class SpectralSynthesizer {
 public:
  SpectralSynthesizer(std::size_t n_vars, double s0, double omega_max, double duration, double dt);
  ~SpectralSynthesizer();
  SpectralSynthesizer(const SpectralSynthesizer&) = delete;
  SpectralSynthesizer& operator=(const SpectralSynthesizer&) = delete;

  void synthesize(std::span<const double> x, std::span<double> out) const;
  void synthesize_direct(std::span<const double> x, std::span<double> out) const;

  bool uses_fft() const noexcept { return fft_size_ != 0; }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t n_vars() const noexcept { return n_vars_; }
  double amplitude() const noexcept { return amplitude_; }
  double delta_omega() const noexcept { return delta_omega_; }

 private:
  std::size_t n_vars_;
  double amplitude_;
  double delta_omega_;
  double dt_;
  std::size_t samples_;
  std::size_t fft_size_ = 0;
  void* plan_ = nullptr;
  std::vector<double> phase_cos_;
  std::vector<double> phase_sin_;
};

}  // namespace ris

#endif  // RIS_EXCITATION_HPP
