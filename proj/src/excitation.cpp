#include "ris/excitation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "ris/errors.hpp"
#include "ris/random.hpp"

namespace ris {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t sample_count(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt)) + 1;
}

}  // namespace

double GroundMotionRecord::pga() const noexcept {
  double peak = 0.0;
  for (double a : acceleration) peak = std::max(peak, std::fabs(a));
  return peak;
}

double GroundMotionRecord::duration() const noexcept {
  return acceleration.empty() ? 0.0 : dt * static_cast<double>(acceleration.size() - 1);
}

GroundMotionRecord GroundMotionRecord::scaled_to_pga(double target_pga) const {
  const double peak = pga();
  if (!(peak > 0.0)) throw ConfigError("cannot rescale an all-zero record");
  GroundMotionRecord out = *this;
  const double factor = target_pga / peak;
  for (double& a : out.acceleration) a *= factor;
  return out;
}

GroundMotionRecord read_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open record file " + path.string());
  std::vector<double> times;
  GroundMotionRecord record;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double t, a;
    if (!(fields >> t >> a)) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    times.push_back(t);
    record.acceleration.push_back(a);
  }
  if (times.size() < 2) throw ConfigError(path.string() + ": record needs at least two samples");
  record.dt = times[1] - times[0];
  if (!(record.dt > 0.0)) throw ConfigError(path.string() + ": time column must increase");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double expected = times[0] + record.dt * static_cast<double>(k);
    if (std::fabs(times[k] - expected) > 1e-6 * record.dt + 1e-9 * std::fabs(expected)) {
      throw ConfigError(path.string() + ": non-uniform sampling at line " + std::to_string(k + 1));
    }
  }
  return record;
}

void write_record(const std::filesystem::path& path, const GroundMotionRecord& record) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write record file " + path.string());
  out << "# time_s acceleration_m_s2\n" << std::setprecision(17);
  for (std::size_t k = 0; k < record.acceleration.size(); ++k) {
    out << record.dt * static_cast<double>(k) << ' ' << record.acceleration[k] << '\n';
  }
  if (!out) throw ConfigError("failed while writing " + path.string());
}

GroundMotionRecord synthetic_record(std::uint64_t seed, const SyntheticRecordSpec& spec) {
  if (!(spec.dt > 0.0) || !(spec.duration > spec.dt)) throw ConfigError("synthetic record: bad time grid");
  const std::size_t count = sample_count(spec.duration, spec.dt);
  RandomStream rng(seed, 0x5EC0);
  const double w = spec.ground_frequency;
  const double two_zeta_w = 2.0 * spec.ground_damping * w;
  const double h = spec.dt;

  // Kanai-Tajimi filter y'' + 2 zeta w y' + w^2 y = -noise; the filtered ground
  // acceleration is -(2 zeta w y' + w^2 y). Noise is held constant per step.
  GroundMotionRecord record;
  record.dt = spec.dt;
  record.acceleration.resize(count);
  double y = 0.0, dy = 0.0;
  auto rate = [&](double yy, double vv, double noise) { return -noise - two_zeta_w * vv - w * w * yy; };
  for (std::size_t k = 0; k < count; ++k) {
    const double t = h * static_cast<double>(k);
    double envelope;
    if (t < spec.rise_time) {
      envelope = (t / spec.rise_time) * (t / spec.rise_time);
    } else if (t <= spec.strong_end) {
      envelope = 1.0;
    } else {
      envelope = std::exp(-spec.decay_rate * (t - spec.strong_end));
    }
    record.acceleration[k] = -envelope * (two_zeta_w * dy + w * w * y);

    const double noise = rng.normal() / std::sqrt(h);
    const double k1y = dy, k1v = rate(y, dy, noise);
    const double k2y = dy + 0.5 * h * k1v, k2v = rate(y + 0.5 * h * k1y, dy + 0.5 * h * k1v, noise);
    const double k3y = dy + 0.5 * h * k2v, k3v = rate(y + 0.5 * h * k2y, dy + 0.5 * h * k2v, noise);
    const double k4y = dy + h * k3v, k4v = rate(y + h * k3y, dy + h * k3v, noise);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return record.scaled_to_pga(spec.target_pga);
}

const std::vector<GroundMotionRecord>& bundled_records() {
  static const std::vector<GroundMotionRecord> records = [] {
    SyntheticRecordSpec north_south;
    north_south.ground_frequency = 5.0 * std::numbers::pi;
    SyntheticRecordSpec east_west;
    east_west.ground_frequency = 4.0 * std::numbers::pi;
    east_west.ground_damping = 0.5;
    east_west.strong_end = 13.0;
    return std::vector<GroundMotionRecord>{synthetic_record(1940, north_south), synthetic_record(1941, east_west)};
  }();
  return records;
}

std::size_t ExcitationModel::samples() const noexcept {
  if (kind == ExcitationKind::spectral_white_noise) return sample_count(duration, dt);
  return records.empty() ? 0 : records.front().acceleration.size();
}

ExcitationModel make_two_record_model(std::vector<GroundMotionRecord> records) {
  if (records.size() != 2) throw ConfigError("two-record excitation needs exactly two records");
  if (records[0].acceleration.size() != records[1].acceleration.size() ||
      std::fabs(records[0].dt - records[1].dt) > 1e-12) {
    throw ConfigError("two-record excitation: records must share length and time step");
  }
  ExcitationModel model;
  model.kind = ExcitationKind::two_record;
  model.dt = records[0].dt;
  model.duration = records[0].duration();
  model.n_vars = 2;
  model.records = std::move(records);
  return model;
}

ExcitationModel make_synthetic_record_model() {
  ExcitationModel model = make_two_record_model(bundled_records());
  model.kind = ExcitationKind::synthetic_record;
  return model;
}

ExcitationModel make_white_noise_model(std::size_t n_vars, double s0, double omega_max, double duration, double dt) {
  ExcitationModel model;
  model.kind = ExcitationKind::spectral_white_noise;
  model.n_vars = n_vars;
  model.s0 = s0;
  model.omega_max = omega_max;
  model.duration = duration;
  model.dt = dt;
  model.synthesizer = std::make_shared<const SpectralSynthesizer>(n_vars, s0, omega_max, duration, dt);
  return model;
}

std::vector<double> two_record_excitation(double x1, double x2, const ExcitationModel& model) {
  if (model.kind == ExcitationKind::spectral_white_noise) throw ConfigError("two_record_excitation: wrong model kind");
  if (model.records.size() != 2) throw ConfigError("two_record_excitation: model is missing its records");
  const auto& r1 = model.records[0].acceleration;
  const auto& r2 = model.records[1].acceleration;
  std::vector<double> out(r1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = x1 * r1[k] + x2 * r2[k];
  return out;
}

std::vector<double> spectral_excitation(std::span<const double> x, const ExcitationModel& model) {
  if (model.kind != ExcitationKind::spectral_white_noise) throw ConfigError("spectral_excitation: wrong model kind");
  if (x.size() % 2 != 0) throw DomainError("spectral_excitation: number of variables must be even");
  std::shared_ptr<const SpectralSynthesizer> synth = model.synthesizer;
  if (!synth || synth->n_vars() != x.size()) {
    synth = std::make_shared<const SpectralSynthesizer>(x.size(), model.s0, model.omega_max, model.duration, model.dt);
  }
  std::vector<double> out(synth->samples());
  synth->synthesize(x, out);
  return out;
}

std::vector<double> build_excitation(std::span<const double> x, const ExcitationModel& model) {
  if (model.kind == ExcitationKind::spectral_white_noise) return spectral_excitation(x, model);
  if (x.size() != 2) throw DomainError("record-based excitation expects two variables");
  return two_record_excitation(x[0], x[1], model);
}

SpectralSynthesizer::SpectralSynthesizer(std::size_t n_vars, double s0, double omega_max, double duration, double dt)
    : n_vars_(n_vars), dt_(dt) {
  if (n_vars == 0 || n_vars % 2 != 0) throw DomainError("spectral representation needs an even, positive n");
  if (!(s0 > 0.0) || !(omega_max > 0.0) || !(dt > 0.0) || !(duration > 0.0))
    throw ConfigError("spectral representation: S0, omega_max, duration and dt must be positive");
  delta_omega_ = 2.0 * omega_max / static_cast<double>(n_vars);
  amplitude_ = std::sqrt(2.0 * s0 * delta_omega_);
  samples_ = sample_count(duration, dt);

  const double period = 2.0 * std::numbers::pi / (delta_omega_ * dt);
  const double rounded = std::round(period);
  if (rounded >= 2.0 && std::fabs(period - rounded) <= 1e-9 * period && rounded <= 1 << 22) {
    fft_size_ = static_cast<std::size_t>(rounded);
    std::vector<std::complex<double>> in(fft_size_), out(fft_size_);
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(fft_size_), reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) {
      fft_size_ = 0;
    } else {
      phase_cos_.resize(samples_);
      phase_sin_.resize(samples_);
      for (std::size_t k = 0; k < samples_; ++k) {
        const double angle = std::numbers::pi * static_cast<double>(k % (2 * fft_size_)) / rounded;
        phase_cos_[k] = std::cos(angle);
        phase_sin_[k] = std::sin(angle);
      }
    }
  }
}

SpectralSynthesizer::~SpectralSynthesizer() {
  if (plan_ != nullptr) {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

void SpectralSynthesizer::synthesize(std::span<const double> x, std::span<double> out) const {
  if (!uses_fft()) {
    synthesize_direct(x, out);
    return;
  }
  if (x.size() != n_vars_ || out.size() != samples_) throw DomainError("spectral synthesis: size mismatch");
  thread_local std::vector<std::complex<double>> coeff, values;
  coeff.assign(fft_size_, {0.0, 0.0});
  values.resize(fft_size_);
  const std::size_t m = n_vars_ / 2;
  for (std::size_t i = 1; i <= m; ++i) coeff[i % fft_size_] += std::complex<double>(x[i - 1], -x[m + i - 1]);
  fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(coeff.data()),
                   reinterpret_cast<fftw_complex*>(values.data()));
  for (std::size_t k = 0; k < samples_; ++k) {
    const std::complex<double>& v = values[k % fft_size_];
    out[k] = amplitude_ * (v.real() * phase_cos_[k] + v.imag() * phase_sin_[k]);
  }
}

void SpectralSynthesizer::synthesize_direct(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_vars_ || out.size() != samples_) throw DomainError("spectral synthesis: size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m = n_vars_ / 2;
  constexpr std::size_t kResync = 256;
  for (std::size_t i = 1; i <= m; ++i) {
    const double cos_amp = amplitude_ * x[i - 1];
    const double sin_amp = amplitude_ * x[m + i - 1];
    if (cos_amp == 0.0 && sin_amp == 0.0) continue;
    const double theta = (static_cast<double>(i) - 0.5) * delta_omega_ * dt_;
    const double rc = std::cos(theta), rs = std::sin(theta);
    double c = 1.0, s = 0.0;
    for (std::size_t k = 0; k < samples_; ++k) {
      if (k % kResync == 0) {
        c = std::cos(theta * static_cast<double>(k));
        s = std::sin(theta * static_cast<double>(k));
      }
      out[k] += cos_amp * c + sin_amp * s;
      const double next_c = c * rc - s * rs;
      s = s * rc + c * rs;
      c = next_c;
    }
  }
}

}  // namespace ris
