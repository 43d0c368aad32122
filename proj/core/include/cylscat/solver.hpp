#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cylscat/cartesian_op.hpp"
#include "cylscat/polar_op.hpp"

namespace cylscat {

enum class Backend { polar, cartesian };

/// L(E) = E - k_b^2 ApplyPotential(chi . E) over either MVP backend.
class ForwardOperator {
  public:
    ForwardOperator(const PolarOperator* op, std::vector<Complex> chi);
    ForwardOperator(const CartesianOperator* op, std::vector<Complex> chi);

    Backend backend() const { return backend_; }
    int size() const { return static_cast<int>(chi_.size()); }
    Complex kb() const;
    const std::vector<Complex>& chi() const { return chi_; }
    const PolarOperator* polar() const { return polar_; }
    const CartesianOperator* cartesian() const { return cartesian_; }

    std::vector<Complex> apply_L(const std::vector<Complex>& e) const;

    /// k_b^2 A_z(chi . E) (the scattering part of L).
    std::vector<Complex> scattered_part(const std::vector<Complex>& e) const;

    std::uint64_t empirical_mults() const;
    std::uint64_t model_mults_per_apply() const;

  private:
    Backend backend_;
    const PolarOperator* polar_ = nullptr;
    const CartesianOperator* cartesian_ = nullptr;
    std::vector<Complex> chi_;
};

struct SolveReport {
    Backend backend{};
    bool converged = false;
    int iterations = 0;
    int restarts = 0;
    int mvp_count = 0;
    std::vector<double> residual_history;  // Err per iteration; last = true residual
    double wall_seconds = 0.0;
    std::uint64_t model_mults_per_apply = 0;
    std::uint64_t empirical_mults = 0;
    std::string note;
    std::vector<Complex> total_field;
};

/// Bi-CGSTAB on apply_L with initial guess E^i, stopping at
/// ||L(E) - E^i|| / ||E^i|| <= tol (L2). Breakdown restarts (at most 3);
/// non-convergence is a reported state. The recursive residual is re-checked
/// against a recomputed one every 25 iterations; the convergence claim is
/// always confirmed with a true residual.
SolveReport bcgs_solve(const ForwardOperator& op, const std::vector<Complex>& rhs,
                       double tol = 1e-4, int max_iter = 500);

/// Scattered field E_z^s = k_b^2 A_z on the observation circle. Polar backend
/// uses the analytic exterior formula; Cartesian sums the kernel directly.
std::vector<Complex> scattered_on_circle(const ForwardOperator& op,
                                         const std::vector<Complex>& e_total,
                                         const ObservationCircle& circle);

double norm2(const std::vector<Complex>& v);

}  // namespace cylscat
