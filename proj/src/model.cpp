#include "clme/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace clme {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::CriticalDamping: return "CriticalDamping";
    case ErrorCode::FreeParticle: return "FreeParticle";
    case ErrorCode::DegenerateLambda: return "DegenerateLambda";
    case ErrorCode::AliasingError: return "AliasingError";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::BoundaryLeak: return "BoundaryLeak";
    case ErrorCode::ResolutionError: return "ResolutionError";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and > 0 (got " << v << ")";
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be finite and >= 0 (got " << v << ")";
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
}

}  // namespace

double bose_occupation(double hbar_omega, double kT) {
  if (kT <= 0.0) return 0.0;
  return 1.0 / std::expm1(hbar_omega / kT);
}

bool near_critical(double gamma, double omega) noexcept {
  const double g2 = gamma * gamma;
  const double w2 = omega * omega;
  return omega > 0.0 && std::abs(g2 - w2) / std::max(g2, w2) < kCriticalDampingGuard;
}

ModelParams make_params(const RawParams& raw, DampingGuard guard) {
  require_positive(raw.mass, "mass");
  require_positive(raw.gamma, "gamma");
  require_positive(raw.hbar, "hbar");
  require_nonnegative(raw.omega, "omega");

  ModelParams p;
  p.mass_ = raw.mass;
  p.gamma_ = raw.gamma;
  p.omega_ = raw.omega;
  p.hbar_ = raw.hbar;

  if (guard == DampingGuard::Enforce && near_critical(raw.gamma, raw.omega)) {
    std::ostringstream os;
    os << "gamma = " << raw.gamma << " and omega = " << raw.omega
       << " are within the critical-damping guard band";
    throw Error(ErrorCode::CriticalDamping, os.str());
  }

  std::visit(
      [&](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, HighTemperature>) {
          require_positive(mode.kT, "temperature");
          p.diffusion_ = 8.0 * raw.mass * raw.gamma * mode.kT;
        } else if constexpr (std::is_same_v<T, OscillatorBath>) {
          require_nonnegative(mode.kT, "temperature");
          if (raw.omega == 0.0)
            throw Error(ErrorCode::InvalidParameter,
                        "oscillator-bath diffusion requires omega > 0");
          const double nbar = bose_occupation(raw.hbar * raw.omega, mode.kT);
          // 4 m gamma hbar omega (2 nbar + 1) >= 4 m gamma hbar omega holds
          // exactly in floating point: the factor is >= 1.
          p.diffusion_ = p.pure_state_diffusion() * (2.0 * nbar + 1.0);
        } else {
          require_positive(mode.D, "D");
          p.diffusion_ = mode.D;
        }
      },
      raw.diffusion);
  return p;
}

ModelParams ModelParams::with_diffusion(double D) const {
  RawParams raw{mass_, gamma_, omega_, hbar_, ExplicitDiffusion{D}};
  return make_params(raw, near_critical(gamma_, omega_) ? DampingGuard::Waive
                                                        : DampingGuard::Enforce);
}

// ---------------------------------------------------------------------------

Axis::Axis(std::size_t n, double half_width)
    : n_(n), half_width_(half_width), step_(2.0 * half_width / static_cast<double>(n)) {
  if (n < 4 || !is_power_of_two(n))
    throw Error(ErrorCode::InvalidParameter, "axis size must be a power of two >= 4");
  require_positive(half_width, "axis half-width");
}

std::vector<double> Axis::values() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
  return out;
}

Axis Axis::reciprocal() const {
  // n * step' / 2 with step' = 2 pi / (n step)
  return Axis(n_, std::numbers::pi / step_);
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------

void validate(const StateSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          require_positive(s.sigma, "sigma");
        } else if constexpr (std::is_same_v<T, CatSpec>) {
          require_positive(s.sigma, "sigma");
          if (!std::isfinite(s.separation) || !std::isfinite(s.phase))
            throw Error(ErrorCode::InvalidParameter, "cat separation and phase must be finite");
        } else if constexpr (std::is_same_v<T, FockSpec>) {
          if (s.n < 0) throw Error(ErrorCode::InvalidParameter, "Fock index must be >= 0");
        } else {
          require_nonnegative(s.kT, "thermal temperature");
        }
      },
      spec);
}

// ---------------------------------------------------------------------------

TraceResult trace_of(const PositionGrid& rho) {
  const auto& R = rho.first_axis();
  const std::size_t j0 = rho.second_axis().zero_index();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) sum += rho(i, j0);
  sum *= R.step();
  return {sum.real(), std::abs(sum.imag())};
}

double trace(const PositionGrid& rho) { return trace_of(rho).value; }

double hermiticity_error(const PositionGrid& rho) {
  const std::size_t nR = rho.first_axis().size();
  const std::size_t nr = rho.second_axis().size();
  double err = 0.0;
  for (std::size_t i = 0; i < nR; ++i)
    for (std::size_t j = 1; j < nr; ++j)
      err = std::max(err, std::abs(rho(i, nr - j) - std::conj(rho(i, j))));
  return err;
}

double hermiticity_error(const CharGrid& rho) {
  const std::size_t nK = rho.first_axis().size();
  const std::size_t nr = rho.second_axis().size();
  double err = 0.0;
  for (std::size_t i = 1; i < nK; ++i)
    for (std::size_t j = 1; j < nr; ++j)
      err = std::max(err, std::abs(rho(nK - i, nr - j) - std::conj(rho(i, j))));
  return err;
}

}  // namespace clme
