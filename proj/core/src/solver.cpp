#include "cylscat/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cylscat {

namespace {
Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s{0.0, 0.0};
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}
}  // namespace

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

ForwardOperator::ForwardOperator(const PolarOperator* op, std::vector<Complex> chi)
    : backend_(Backend::polar), polar_(op), chi_(std::move(chi)) {
    if (chi_.size() != static_cast<size_t>(op->grid().cells()))
        throw std::invalid_argument("ForwardOperator: chi dims mismatch polar grid");
}

ForwardOperator::ForwardOperator(const CartesianOperator* op, std::vector<Complex> chi)
    : backend_(Backend::cartesian), cartesian_(op), chi_(std::move(chi)) {
    if (chi_.size() != static_cast<size_t>(op->grid().cells()))
        throw std::invalid_argument("ForwardOperator: chi dims mismatch cartesian grid");
}

Complex ForwardOperator::kb() const {
    return backend_ == Backend::polar ? polar_->kb() : cartesian_->kb();
}

std::vector<Complex> ForwardOperator::scattered_part(const std::vector<Complex>& e) const {
    std::vector<Complex> src(e.size());
    for (size_t i = 0; i < e.size(); ++i) src[i] = chi_[i] * e[i];
    const Complex k2 = kb() * kb();
    if (backend_ == Backend::polar) {
        const PolarGrid& g = polar_->grid();
        PolarField f(g.rings, g.angles);
        f.v = std::move(src);
        PolarField a = polar_->apply_potential(f);
        for (Complex& x : a.v) x *= k2;
        return std::move(a.v);
    }
    std::vector<Complex> a = cartesian_->apply_potential(src);
    for (Complex& x : a) x *= k2;
    return a;
}

std::vector<Complex> ForwardOperator::apply_L(const std::vector<Complex>& e) const {
    if (e.size() != chi_.size())
        throw std::invalid_argument("apply_L: field dims mismatch operator");
    std::vector<Complex> s = scattered_part(e);
    for (size_t i = 0; i < e.size(); ++i) s[i] = e[i] - s[i];
    return s;
}

std::uint64_t ForwardOperator::empirical_mults() const {
    return backend_ == Backend::polar ? polar_->empirical_mults()
                                      : cartesian_->empirical_mults();
}

std::uint64_t ForwardOperator::model_mults_per_apply() const {
    if (backend_ == Backend::polar) {
        const PolarGrid& g = polar_->grid();
        return PolarOperator::count_mults_1d(g.rings, g.angles);
    }
    const CartesianGrid& g = cartesian_->grid();
    return CartesianOperator::count_mults_2d(g.nx, g.ny);
}

SolveReport bcgs_solve(const ForwardOperator& op, const std::vector<Complex>& rhs,
                       double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("bcgs_solve: tol must be > 0");
    const auto t0 = std::chrono::steady_clock::now();

    SolveReport rep;
    rep.backend = op.backend();
    rep.model_mults_per_apply = op.model_mults_per_apply();
    const std::uint64_t mults0 = op.empirical_mults();

    const size_t n = rhs.size();
    const double bnorm = norm2(rhs);
    auto finish = [&](std::vector<Complex> x) {
        rep.total_field = std::move(x);
        rep.empirical_mults = op.empirical_mults() - mults0;
        rep.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        return rep;
    };

    if (bnorm == 0.0) {
        rep.converged = true;
        rep.residual_history.push_back(0.0);
        return finish(std::vector<Complex>(n, Complex{0.0, 0.0}));
    }

    // Born-style start: x = E^i.
    std::vector<Complex> x = rhs;
    std::vector<Complex> r = op.apply_L(x);
    rep.mvp_count++;
    for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    rep.residual_history.push_back(norm2(r) / bnorm);
    if (rep.residual_history.back() <= tol) {
        rep.converged = true;
        return finish(std::move(x));
    }

    std::vector<Complex> rhat = r, p(n), v(n), s(n), t(n);
    Complex rho_old{1.0, 0.0}, alpha{1.0, 0.0}, omega{1.0, 0.0};
    bool fresh = true;  // p, v start at zero after (re)start
    std::fill(p.begin(), p.end(), Complex{0.0, 0.0});
    std::fill(v.begin(), v.end(), Complex{0.0, 0.0});

    const double breakdown = 1e-30;
    auto restart = [&]() {
        r = op.apply_L(x);
        rep.mvp_count++;
        for (size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
        rhat = r;
        std::fill(p.begin(), p.end(), Complex{0.0, 0.0});
        std::fill(v.begin(), v.end(), Complex{0.0, 0.0});
        rho_old = alpha = omega = Complex{1.0, 0.0};
        fresh = true;
        rep.restarts++;
    };

    for (int it = 1; it <= max_iter; ++it) {
        Complex rho = dot(rhat, r);
        if (std::abs(rho) < breakdown * norm2(rhat) * norm2(r)) {
            if (rep.restarts >= 3) {
                rep.note = "bi-cgstab breakdown (rho), restarts exhausted";
                rep.iterations = it - 1;
                rep.residual_history.push_back(norm2(r) / bnorm);
                return finish(std::move(x));
            }
            restart();
            rho = dot(rhat, r);
        }
        if (fresh) {
            p = r;
            fresh = false;
        } else {
            Complex beta = (rho / rho_old) * (alpha / omega);
            for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        v = op.apply_L(p);
        rep.mvp_count++;
        Complex rv = dot(rhat, v);
        if (std::abs(rv) < breakdown * norm2(rhat) * norm2(v)) {
            if (rep.restarts >= 3) {
                rep.note = "bi-cgstab breakdown (rhat.v), restarts exhausted";
                rep.iterations = it;
                rep.residual_history.push_back(norm2(r) / bnorm);
                return finish(std::move(x));
            }
            restart();
            continue;
        }
        alpha = rho / rv;
        for (size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

        double snorm = norm2(s) / bnorm;
        if (snorm <= tol) {
            for (size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            rep.iterations = it;
            rep.residual_history.push_back(snorm);
            break;
        }

        t = op.apply_L(s);
        rep.mvp_count++;
        Complex tt = dot(t, t);
        if (std::abs(tt) < breakdown) {
            if (rep.restarts >= 3) {
                rep.note = "bi-cgstab breakdown (t.t), restarts exhausted";
                rep.iterations = it;
                rep.residual_history.push_back(norm2(r) / bnorm);
                return finish(std::move(x));
            }
            restart();
            continue;
        }
        omega = dot(t, s) / tt;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        double rnorm = norm2(r) / bnorm;
        rep.residual_history.push_back(rnorm);
        rep.iterations = it;

        // Guard against drift of the recursive residual.
        if (it % 25 == 0) {
            std::vector<Complex> rt = op.apply_L(x);
            rep.mvp_count++;
            for (size_t i = 0; i < n; ++i) rt[i] = rhs[i] - rt[i];
            double truenorm = norm2(rt) / bnorm;
            if (std::fabs(truenorm - rnorm) > 10.0 * std::max(tol, rnorm)) {
                r = std::move(rt);
                rhat = r;
                std::fill(p.begin(), p.end(), Complex{0.0, 0.0});
                std::fill(v.begin(), v.end(), Complex{0.0, 0.0});
                rho_old = alpha = omega = Complex{1.0, 0.0};
                fresh = true;
            }
        }
        if (rnorm <= tol) break;
        rho_old = rho;
    }

    // The convergence claim is made on an independently recomputed residual.
    std::vector<Complex> rt = op.apply_L(x);
    rep.mvp_count++;
    for (size_t i = 0; i < n; ++i) rt[i] = rhs[i] - rt[i];
    double final_res = norm2(rt) / bnorm;
    rep.residual_history.push_back(final_res);
    rep.converged = final_res <= tol;
    if (!rep.converged && rep.note.empty())
        rep.note = "not converged within max_iter = " + std::to_string(max_iter);
    return finish(std::move(x));
}

std::vector<Complex> scattered_on_circle(const ForwardOperator& op,
                                         const std::vector<Complex>& e_total,
                                         const ObservationCircle& circle) {
    std::vector<Complex> src(e_total.size());
    const std::vector<Complex>& chi = op.chi();
    for (size_t i = 0; i < src.size(); ++i) src[i] = chi[i] * e_total[i];
    const Complex k2 = op.kb() * op.kb();

    std::vector<Complex> a;
    if (op.backend() == Backend::polar) {
        const PolarGrid& g = op.polar()->grid();
        if (circle.radius < g.radius * (1.0 - 1e-12))
            throw std::domain_error("scattered_on_circle: circle inside embedding disk");
        PolarField f(g.rings, g.angles);
        f.v = std::move(src);
        a = op.polar()->exterior_potential(f, circle);
    } else {
        a = op.cartesian()->exterior_potential(src, circle);
    }
    for (Complex& x : a) x *= k2;
    return a;
}

}  // namespace cylscat
