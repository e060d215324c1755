#include "perideg/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "perideg/spectral.hpp"

namespace perideg {

FourierLoop FourierLoop::zero(int n, int modes, double period) {
    FourierLoop u;
    u.period = period;
    u.n = n;
    u.modes = modes;
    u.a0.assign(n, 0.0);
    u.ac.assign(modes, Vec(n, 0.0));
    u.as.assign(modes, Vec(n, 0.0));
    return u;
}

Vec FourierLoop::eval(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec x = a0;
    for (int k = 1; k <= modes; ++k) {
        const double c = std::cos(w * k * t), s = std::sin(w * k * t);
        for (int i = 0; i < n; ++i) x[i] += ac[k - 1][i] * c + as[k - 1][i] * s;
    }
    return x;
}

Vec FourierLoop::eval_deriv(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec x(n, 0.0);
    for (int k = 1; k <= modes; ++k) {
        const double c = std::cos(w * k * t), s = std::sin(w * k * t);
        for (int i = 0; i < n; ++i) x[i] += w * k * (-ac[k - 1][i] * s + as[k - 1][i] * c);
    }
    return x;
}

Vec FourierLoop::eval_second_deriv(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec x(n, 0.0);
    for (int k = 1; k <= modes; ++k) {
        const double c = std::cos(w * k * t), s = std::sin(w * k * t);
        const double w2 = w * k * w * k;
        for (int i = 0; i < n; ++i) x[i] -= w2 * (ac[k - 1][i] * c + as[k - 1][i] * s);
    }
    return x;
}

double FourierLoop::coeff_norm() const {
    double s = dot(a0, a0);
    for (int k = 1; k <= modes; ++k) s += dot(ac[k - 1], ac[k - 1]) + dot(as[k - 1], as[k - 1]);
    return std::sqrt(s);
}

double FourierLoop::harmonic_norm() const {
    double s = 0.0;
    for (int k = 1; k <= modes; ++k) s += dot(ac[k - 1], ac[k - 1]) + dot(as[k - 1], as[k - 1]);
    return std::sqrt(s);
}

double FourierLoop::mode_norm(int k) const {
    return std::sqrt(dot(ac[k - 1], ac[k - 1]) + dot(as[k - 1], as[k - 1]));
}

double FourierLoop::h1_norm() const {
    const double w = 2.0 * M_PI / period;
    double s = period * dot(a0, a0);
    for (int k = 1; k <= modes; ++k)
        s += 0.5 * period * (1.0 + w * k * w * k) * (dot(ac[k - 1], ac[k - 1]) + dot(as[k - 1], as[k - 1]));
    return std::sqrt(s);
}

FourierLoop FourierLoop::time_shift(double shift) const {
    const double w = 2.0 * M_PI / period;
    FourierLoop v = *this;
    for (int k = 1; k <= modes; ++k) {
        const double c = std::cos(w * k * shift), s = std::sin(w * k * shift);
        for (int i = 0; i < n; ++i) {
            v.ac[k - 1][i] = ac[k - 1][i] * c + as[k - 1][i] * s;
            v.as[k - 1][i] = as[k - 1][i] * c - ac[k - 1][i] * s;
        }
    }
    return v;
}

namespace {

using GradFn = std::function<Vec(const Vec&, double)>;
using HessFn = std::function<SymMatrix(const Vec&, double)>;
using ValueFn = std::function<double(const Vec&, double)>;

/// Spectral-Galerkin engine over packed coefficients
/// (a0, ac_1..ac_N, as_1..as_N), each block of size n.  The quadrature grid
/// has 4N+4 points, so products of basis functions integrate exactly.
class Engine {
public:
    Engine(int n, double period, int modes, GradFn grad, HessFn hess)
        : n_(n), T_(period), N_(modes), M_(4 * modes + 4), P_(2 * modes + 1),
          grad_(std::move(grad)), hess_(std::move(hess)) {
        const double w = 2.0 * M_PI / T_;
        basis_.assign(static_cast<size_t>(M_) * P_, 0.0);
        for (int j = 0; j < M_; ++j) {
            const double t = T_ * j / M_;
            basis_at(j, 0) = 1.0;
            for (int k = 1; k <= N_; ++k) {
                basis_at(j, k) = std::cos(w * k * t);
                basis_at(j, N_ + k) = std::sin(w * k * t);
            }
        }
        lin_.assign(P_, 0.0);
        nl_scale_.assign(P_, 0.0);
        proj_factor_.assign(P_, 0.0);
        weight_.assign(P_, 0.0);
        lin_[0] = 0.0;
        nl_scale_[0] = 1.0;
        proj_factor_[0] = 1.0;
        weight_[0] = T_;
        for (int k = 1; k <= N_; ++k) {
            const double wk2 = 4.0 * k * k * M_PI * M_PI;
            const double t2 = T_ * T_;
            for (int p : {k, N_ + k}) {
                lin_[p] = wk2 / (wk2 + t2);
                nl_scale_[p] = t2 / (wk2 + t2);
                proj_factor_[p] = 2.0;
                weight_[p] = 0.5 * T_ * (1.0 + wk2 / t2);
            }
        }
    }

    int dof() const { return n_ * P_; }
    int mode_count() const { return N_; }
    int grid_size() const { return M_; }

    int dof_index(int p, int i) const { return p * n_ + i; }
    int cos_basis(int k) const { return k; }
    int sin_basis(int k) const { return N_ + k; }

    Vec pack(const FourierLoop& u) const {
        Vec z(dof(), 0.0);
        for (int i = 0; i < n_; ++i) z[dof_index(0, i)] = u.a0[i];
        for (int k = 1; k <= N_; ++k)
            for (int i = 0; i < n_; ++i) {
                z[dof_index(cos_basis(k), i)] = u.ac[k - 1][i];
                z[dof_index(sin_basis(k), i)] = u.as[k - 1][i];
            }
        return z;
    }

    FourierLoop unpack(const Vec& z) const {
        FourierLoop u = FourierLoop::zero(n_, N_, T_);
        for (int i = 0; i < n_; ++i) u.a0[i] = z[dof_index(0, i)];
        for (int k = 1; k <= N_; ++k)
            for (int i = 0; i < n_; ++i) {
                u.ac[k - 1][i] = z[dof_index(cos_basis(k), i)];
                u.as[k - 1][i] = z[dof_index(sin_basis(k), i)];
            }
        return u;
    }

    std::vector<Vec> grid_values(const Vec& z) const {
        std::vector<Vec> vals(M_, Vec(n_, 0.0));
        for (int j = 0; j < M_; ++j) {
            for (int p = 0; p < P_; ++p) {
                const double b = basis_at(j, p);
                if (b == 0.0) continue;
                for (int i = 0; i < n_; ++i) vals[j][i] += b * z[dof_index(p, i)];
            }
        }
        return vals;
    }

    Vec gradient(const Vec& z, double lam) const {
        const std::vector<Vec> uj = grid_values(z);
        Vec g(dof(), 0.0);
        // projected coefficients of grad V along the loop
        std::vector<Vec> proj(P_, Vec(n_, 0.0));
        for (int j = 0; j < M_; ++j) {
            const Vec w = grad_(uj[j], lam);
            for (double v : w)
                if (!std::isfinite(v))
                    throw std::runtime_error(
                        "galerkin: potential gradient is not finite on the quadrature grid");
            for (int p = 0; p < P_; ++p) {
                const double b = basis_at(j, p);
                if (b == 0.0) continue;
                for (int i = 0; i < n_; ++i) proj[p][i] += b * w[i];
            }
        }
        for (int p = 0; p < P_; ++p) {
            const double f = proj_factor_[p] / M_;
            for (int i = 0; i < n_; ++i)
                g[dof_index(p, i)] = lin_[p] * z[dof_index(p, i)] - nl_scale_[p] * f * proj[p][i];
        }
        return g;
    }

    double energy(const Vec& z, const ValueFn& value, double lam) const {
        const std::vector<Vec> uj = grid_values(z);
        const double w = 2.0 * M_PI / T_;
        double e = 0.0;
        for (int j = 0; j < M_; ++j) {
            const double t = T_ * j / M_;
            Vec du(n_, 0.0);
            for (int k = 1; k <= N_; ++k) {
                const double c = std::cos(w * k * t), s = std::sin(w * k * t);
                for (int i = 0; i < n_; ++i)
                    du[i] += w * k * (-z[dof_index(cos_basis(k), i)] * s +
                                      z[dof_index(sin_basis(k), i)] * c);
            }
            e += 0.5 * dot(du, du) - value(uj[j], lam);
        }
        return e * T_ / M_;
    }

    double h1_norm(const Vec& g) const {
        double s = 0.0;
        for (int p = 0; p < P_; ++p)
            for (int i = 0; i < n_; ++i) {
                const double v = g[dof_index(p, i)];
                s += weight_[p] * v * v;
            }
        return std::sqrt(s);
    }

    Mat jacobian(const Vec& z, double lam) const {
        const std::vector<Vec> uj = grid_values(z);
        const int m = dof();
        Mat jac(m, m);
        // quadrature part: sum_j H(u_j)[i,i'] * phi_p(j) * phi_q(j)
        std::vector<double> row(P_);
        for (int j = 0; j < M_; ++j) {
            const SymMatrix h = hess_(uj[j], lam);
            for (int p = 0; p < P_; ++p) row[p] = basis_at(j, p);
            for (int p = 0; p < P_; ++p) {
                if (row[p] == 0.0) continue;
                for (int q = 0; q < P_; ++q) {
                    const double bb = row[p] * row[q];
                    if (bb == 0.0) continue;
                    for (int i = 0; i < n_; ++i)
                        for (int i2 = 0; i2 < n_; ++i2)
                            jac.at(dof_index(p, i), dof_index(q, i2)) += bb * h.at(i, i2);
                }
            }
        }
        for (int p = 0; p < P_; ++p) {
            const double f = -nl_scale_[p] * proj_factor_[p] / M_;
            for (int i = 0; i < n_; ++i) {
                const int r = dof_index(p, i);
                for (int c = 0; c < m; ++c) jac.at(r, c) *= f;
                jac.at(r, r) += lin_[p];
            }
        }
        return jac;
    }

    Vec dgrad_dlambda(const Vec& z, double lam) const {
        const double h = 1e-6 * (1.0 + std::abs(lam));
        const Vec gp = gradient(z, lam + h);
        const Vec gm = gradient(z, lam - h);
        Vec d(dof());
        for (int i = 0; i < dof(); ++i) d[i] = (gp[i] - gm[i]) / (2.0 * h);
        return d;
    }

    struct NewtonOutcome {
        bool converged = false;
        int iters = 0;
        double grad_norm = 0.0;
        std::string note;
    };

    /// Newton iteration with one coefficient pinned to remove the phase
    /// degeneracy: the pinned unknown and its gradient row are dropped.
    NewtonOutcome newton(Vec& z, double lam, int pin, double tol, int max_iters) const {
        const int m = dof();
        NewtonOutcome out;
        Vec g;
        try {
            g = gradient(z, lam);
        } catch (const std::runtime_error& e) {
            out.note = e.what();
            out.grad_norm = std::numeric_limits<double>::infinity();
            return out;
        }
        double gn = h1_norm(g);
        for (int it = 0; it < max_iters; ++it) {
            if (gn <= tol) {
                out.converged = true;
                out.iters = it;
                out.grad_norm = gn;
                return out;
            }
            if (!std::isfinite(gn) || norm2(z) > 1e8) {
                out.note = "diverged";
                break;
            }
            Mat jac = jacobian(z, lam);
            Mat jr(m - 1, m - 1);
            Vec br(m - 1);
            for (int r = 0, rr = 0; r < m; ++r) {
                if (r == pin) continue;
                br[rr] = -g[r];
                for (int c = 0, cc = 0; c < m; ++c) {
                    if (c == pin) continue;
                    jr.at(rr, cc) = jac.at(r, c);
                    ++cc;
                }
                ++rr;
            }
            Vec step;
            try {
                step = lu_solve(std::move(jr), std::move(br));
            } catch (const std::runtime_error&) {
                out.note = "singular Jacobian";
                break;
            }
            // backtracking: halve the step while the residual grows
            double factor = 1.0;
            Vec z_new;
            Vec g_new;
            double gn_new = 0.0;
            bool ok = false;
            for (int half = 0; half < 5; ++half) {
                z_new = z;
                for (int c = 0, cc = 0; c < m; ++c) {
                    if (c == pin) continue;
                    z_new[c] += factor * step[cc++];
                }
                try {
                    g_new = gradient(z_new, lam);
                    gn_new = h1_norm(g_new);
                } catch (const std::runtime_error&) {
                    gn_new = std::numeric_limits<double>::infinity();
                }
                if (std::isfinite(gn_new) && (gn_new < gn || gn_new <= tol)) {
                    ok = true;
                    break;
                }
                factor *= 0.5;
            }
            if (!ok) {
                out.note = "line search stalled";
                out.iters = it + 1;
                out.grad_norm = gn;
                return out;
            }
            z = std::move(z_new);
            g = std::move(g_new);
            gn = gn_new;
            out.iters = it + 1;
        }
        out.grad_norm = gn;
        if (gn <= tol) out.converged = true;
        if (!out.converged && out.note.empty()) out.note = "iteration cap reached";
        return out;
    }

private:
    double& basis_at(int j, int p) { return basis_[static_cast<size_t>(j) * P_ + p]; }
    double basis_at(int j, int p) const { return basis_[static_cast<size_t>(j) * P_ + p]; }

    int n_;
    double T_;
    int N_, M_, P_;
    GradFn grad_;
    HessFn hess_;
    std::vector<double> basis_;
    std::vector<double> lin_, nl_scale_, proj_factor_, weight_;
};

GradFn fixed_gradient(const SystemSpec& spec) {
    if (!spec.potential.available())
        throw std::invalid_argument("galerkin: the system carries no potential callbacks");
    auto g = spec.potential.gradient;
    return [g](const Vec& x, double) { return g(x); };
}

HessFn fixed_hessian(const SystemSpec& spec) {
    auto h = spec.potential.hessian;
    return [h](const Vec& x, double) { return h(x); };
}

double rms_distance(const FourierLoop& u, const Vec& p) {
    double s = 0.0;
    for (int i = 0; i < u.n; ++i) s += (u.a0[i] - p[i]) * (u.a0[i] - p[i]);
    for (int k = 1; k <= u.modes; ++k)
        s += 0.5 * (dot(u.ac[k - 1], u.ac[k - 1]) + dot(u.as[k - 1], u.as[k - 1]));
    return std::sqrt(s);
}

double distance_to_stationary_set(const FourierLoop& u, const SystemSpec& spec) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cp : spec.critical_points) best = std::min(best, rms_distance(u, cp.location));
    if (spec.critical_points.empty()) best = rms_distance(u, Vec(u.n, 0.0));
    return best;
}

}  // namespace

FourierLoop galerkin_gradient(const SystemSpec& spec, const FourierLoop& u) {
    Engine eng(spec.n, u.period, u.modes, fixed_gradient(spec), fixed_hessian(spec));
    return eng.unpack(eng.gradient(eng.pack(u), 0.0));
}

double galerkin_energy(const SystemSpec& spec, const FourierLoop& u) {
    if (!spec.potential.available())
        throw std::invalid_argument("galerkin: the system carries no potential callbacks");
    Engine eng(spec.n, u.period, u.modes, fixed_gradient(spec), fixed_hessian(spec));
    auto value = spec.potential.value;
    return eng.energy(eng.pack(u), [value](const Vec& x, double) { return value(x); }, 0.0);
}

Mat galerkin_jacobian(const SystemSpec& spec, const FourierLoop& u) {
    Engine eng(spec.n, u.period, u.modes, fixed_gradient(spec), fixed_hessian(spec));
    return eng.jacobian(eng.pack(u), 0.0);
}

double ode_residual(const SystemSpec& spec, const FourierLoop& u, int grid) {
    if (!spec.potential.available())
        throw std::invalid_argument("ode_residual: the system carries no potential callbacks");
    double worst = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double t = u.period * j / grid;
        const Vec acc = u.eval_second_deriv(t);
        const Vec gv = spec.potential.gradient(u.eval(t));
        double s = 0.0;
        for (int i = 0; i < u.n; ++i) s += (acc[i] + gv[i]) * (acc[i] + gv[i]);
        if (!std::isfinite(s)) throw std::runtime_error("ode_residual: non-finite value on the grid");
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

std::vector<Vec> rk4_flow(const std::function<Vec(const Vec&)>& grad_v, const Vec& y0,
                          double t_end, int steps) {
    const int n = static_cast<int>(y0.size()) / 2;
    auto rhs = [&](const Vec& y) {
        Vec x(y.begin(), y.begin() + n);
        Vec d(2 * n);
        const Vec g = grad_v(x);
        for (int i = 0; i < n; ++i) {
            d[i] = y[n + i];
            d[n + i] = -g[i];
        }
        return d;
    };
    std::vector<Vec> out;
    out.reserve(steps + 1);
    Vec y = y0;
    out.push_back(y);
    const double h = t_end / steps;
    for (int s = 0; s < steps; ++s) {
        const Vec k1 = rhs(y);
        const Vec k2 = rhs(y + (h / 2) * k1);
        const Vec k3 = rhs(y + (h / 2) * k2);
        const Vec k4 = rhs(y + h * k3);
        for (size_t i = 0; i < y.size(); ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        out.push_back(y);
    }
    return out;
}

MinimalPeriod minimal_period_of(const FourierLoop& loop, double active_mode_rel_tol) {
    const double total = loop.coeff_norm();
    std::vector<int> active;
    for (int k = 1; k <= loop.modes; ++k)
        if (loop.mode_norm(k) > active_mode_rel_tol * total) active.push_back(k);
    if (active.empty()) throw std::domain_error("minimal_period_of: constant loop");
    int g = 0;
    for (int k : active) g = std::gcd(g, k);
    return {loop.period / g, g};
}

namespace {

/// Direction for a seed excited in mode k at the point p: the eigenvector
/// at the resonant eigenvalue when the Hessian is resonant at k, otherwise
/// the eigenvector whose eigenvalue sits just above the k-th threshold,
/// otherwise the one with the largest eigenvalue.
Vec seed_direction(const SymMatrix& hessian, double period, int k) {
    const SpectralData sd = eigen_sym(hessian);
    const double threshold = mode_threshold(period, k);
    const double tol = Tolerances{}.resonance_tol(hessian);
    int chosen = -1;
    double best_above = std::numeric_limits<double>::infinity();
    int col = 0, chosen_col = 0;
    for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
        const double ev = sd.eigenvalues[c];
        if (std::abs(ev - threshold) <= tol) {
            chosen = static_cast<int>(c);
            chosen_col = col;
            break;
        }
        if (ev > threshold && ev < best_above) {
            best_above = ev;
            chosen = static_cast<int>(c);
            chosen_col = col;
        }
        col += sd.multiplicities[c];
    }
    if (chosen < 0) {
        chosen = static_cast<int>(sd.eigenvalues.size()) - 1;
        chosen_col = sd.n - sd.multiplicities.back();
    }
    Vec dir(sd.n);
    for (int i = 0; i < sd.n; ++i) dir[i] = sd.basis.at(i, chosen_col);
    return dir;
}

OrbitResult classify(const SystemSpec& spec, const Engine& eng, const Vec& z, double grad_norm,
                     int iters, const GalerkinConfig& cfg, const std::string& note_prefix) {
    OrbitResult res;
    res.loop = eng.unpack(z);
    res.grad_norm = grad_norm;
    res.newton_iters = iters;

    res.distance_to_stationary = distance_to_stationary_set(res.loop, spec);
    const double harmonics = res.loop.harmonic_norm();

    if (grad_norm > cfg.newton_tol) {
        res.note = note_prefix.empty() ? "gradient norm above tolerance" : note_prefix;
        return res;
    }
    if (harmonics <= cfg.stationary_tol || res.distance_to_stationary <= cfg.stationary_tol) {
        res.note = "converged to a stationary loop";
        return res;
    }

    const MinimalPeriod mp = minimal_period_of(res.loop, cfg.active_mode_rel_tol);
    res.minimal_period = mp.period;
    res.isotropy_k = mp.isotropy_k;
    res.ode_residual = ode_residual(spec, res.loop, cfg.residual_grid);

    // independent time-stepping check from the loop's initial condition
    Vec y0(2 * spec.n);
    const Vec x0 = res.loop.eval(0.0), v0 = res.loop.eval_deriv(0.0);
    for (int i = 0; i < spec.n; ++i) {
        y0[i] = x0[i];
        y0[spec.n + i] = v0[i];
    }
    const auto traj = rk4_flow(spec.potential.gradient, y0, spec.period, cfg.rk4_steps);
    double gap = 0.0;
    for (size_t s = 0; s < traj.size(); ++s) {
        const double t = spec.period * static_cast<double>(s) / cfg.rk4_steps;
        const Vec x = res.loop.eval(t);
        double d = 0.0;
        for (int i = 0; i < spec.n; ++i) d += (x[i] - traj[s][i]) * (x[i] - traj[s][i]);
        gap = std::max(gap, std::sqrt(d));
    }
    res.rk4_trajectory_gap = gap;
    double per = 0.0;
    for (int i = 0; i < spec.n; ++i) {
        per += std::abs(traj.back()[i] - traj.front()[i]);
        per += std::abs(traj.back()[spec.n + i] - traj.front()[spec.n + i]);
    }
    res.rk4_periodicity_defect = per;

    const double tail = res.loop.mode_norm(res.loop.modes);
    if (res.ode_residual > cfg.ode_residual_tol) {
        res.note = "ode residual above tolerance";
    } else if (res.rk4_periodicity_defect > cfg.periodicity_tol) {
        res.note = "periodicity defect above tolerance";
    } else if (tail > cfg.tail_rel_tol * res.loop.coeff_norm()) {
        res.note = "mode tail too large; increase the mode cutoff";
    } else {
        res.accepted = true;
        res.note = "accepted";
    }
    return res;
}

}  // namespace

OrbitResult find_orbit(const SystemSpec& spec, int seed_mode, double seed_amplitude,
                       const GalerkinConfig& cfg, const std::string& seed_point_id) {
    if (seed_mode < 1) throw std::invalid_argument("find_orbit: seed mode must be >= 1");
    if (!spec.potential.available())
        throw std::invalid_argument("find_orbit: the system carries no potential callbacks");

    Vec center(spec.n, 0.0);
    SymMatrix hess_at_center = spec.v_inf;
    std::string point_id = "origin-of-coordinates";
    if (!spec.critical_points.empty()) {
        const CriticalPoint* cp = seed_point_id.empty() ? &spec.critical_points.front()
                                                        : spec.find_point(seed_point_id);
        if (!cp) throw std::invalid_argument("find_orbit: unknown seed point '" + seed_point_id + "'");
        center = cp->location;
        hess_at_center = cp->hessian;
        point_id = cp->id;
    }

    Engine eng(spec.n, spec.period, cfg.modes, fixed_gradient(spec), fixed_hessian(spec));
    const Vec dir = seed_direction(hess_at_center, spec.period, seed_mode);

    FourierLoop seed = FourierLoop::zero(spec.n, cfg.modes, spec.period);
    seed.a0 = center;
    for (int i = 0; i < spec.n; ++i) seed.ac[seed_mode - 1][i] = seed_amplitude * dir[i];

    int pin_comp = 0;
    for (int i = 1; i < spec.n; ++i)
        if (std::abs(dir[i]) > std::abs(dir[pin_comp])) pin_comp = i;
    const int pin = eng.dof_index(eng.sin_basis(seed_mode), pin_comp);

    Vec z = eng.pack(seed);
    const auto outcome = eng.newton(z, 0.0, pin, cfg.newton_tol, cfg.newton_max_iters);

    OrbitResult res = classify(spec, eng, z, outcome.grad_norm, outcome.iters, cfg,
                               outcome.converged ? "" : ("newton failed: " + outcome.note));
    res.seed_mode = seed_mode;
    res.seed_amplitude = seed_amplitude;
    res.seed_point = point_id;
    return res;
}

OrbitResult find_orbit_auto(const SystemSpec& spec, int witness_k, const GalerkinConfig& cfg) {
    const double threshold = mode_threshold(spec.period, witness_k);
    std::vector<std::pair<int, std::string>> candidates;  // (-count above threshold, id)
    for (const auto& cp : spec.critical_points) {
        const SpectralData sd = eigen_sym(cp.hessian);
        candidates.emplace_back(-sd.count_strictly_above(threshold), cp.id);
    }
    std::stable_sort(candidates.begin(), candidates.end());
    if (candidates.empty()) candidates.emplace_back(0, "");

    // how close an attempt came to an acceptable orbit
    auto rank = [](const OrbitResult& r) {
        if (r.accepted) return 4;
        if (r.note == "ode residual above tolerance" ||
            r.note == "periodicity defect above tolerance" ||
            r.note.find("mode tail") != std::string::npos)
            return 3;  // a genuine orbit, under-resolved
        if (r.note.find("newton") == std::string::npos &&
            r.note != "converged to a stationary loop")
            return 2;
        if (r.note != "converged to a stationary loop") return 1;
        return 0;
    };

    GalerkinConfig local = cfg;
    OrbitResult best;
    best.note = "no seed attempted";
    bool have = false;
    // A converged loop rejected only for its discretization residual just
    // needs more modes; escalate the cutoff before giving up.
    for (int escalation = 0; escalation < 3; ++escalation) {
        for (const auto& [neg_count, id] : candidates) {
            for (double amp : local.amplitude_schedule) {
                OrbitResult r = find_orbit(spec, witness_k, amp * spec.length_scale(), local, id);
                if (r.accepted) return r;
                if (!have || rank(r) > rank(best) ||
                    (rank(r) == rank(best) && r.grad_norm < best.grad_norm)) {
                    best = r;
                    have = true;
                }
            }
        }
        if (rank(best) != 3) break;
        local.modes *= 2;
    }
    return best;
}

PotentialFamily constant_family(const PotentialBundle& base) {
    if (!base.gradient) throw std::invalid_argument("constant_family: missing callbacks");
    auto v = base.value;
    auto g = base.gradient;
    auto h = base.hessian;
    return PotentialFamily{
        [v](const Vec& x, double) { return v(x); },
        [g](const Vec& x, double) { return g(x); },
        [h](const Vec& x, double) { return h(x); },
    };
}

PotentialFamily coupling_family(const ModelPotential& base) {
    ModelPotential m = base;
    return PotentialFamily{
        [m](const Vec& x, double lam) {
            const double q = dot(x, m.v_inf.apply(x));
            return 0.5 * q - (1.0 + lam) / std::sqrt(dot(x, x) + m.a);
        },
        [m](const Vec& x, double lam) {
            const double s = (1.0 + lam) * std::pow(dot(x, x) + m.a, -1.5);
            Vec g = m.v_inf.apply(x);
            for (int i = 0; i < m.n; ++i) g[i] += s * x[i];
            return g;
        },
        [m](const Vec& x, double lam) {
            const double r2 = dot(x, x) + m.a;
            const double s3 = (1.0 + lam) * std::pow(r2, -1.5);
            const double s5 = (1.0 + lam) * std::pow(r2, -2.5);
            SymMatrix h = m.v_inf;
            for (int i = 0; i < m.n; ++i)
                for (int j = 0; j < m.n; ++j)
                    h.at(i, j) += -3.0 * x[i] * x[j] * s5 + (i == j ? s3 : 0.0);
            return h;
        },
    };
}

std::string to_string(BranchVerdict v) {
    switch (v) {
        case BranchVerdict::Unbounded: return "UNBOUNDED";
        case BranchVerdict::HitStationary: return "HIT_STATIONARY";
        case BranchVerdict::StepFailure: return "STEP_FAILURE";
    }
    return "?";
}

BranchRecord trace_branch(const PotentialFamily& family, const SystemSpec& spec0,
                          const OrbitResult& start, int direction, const TraceConfig& cfg) {
    if (!start.accepted) throw std::invalid_argument("trace_branch: start orbit was not accepted");
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("trace_branch: direction must be +1 or -1");

    const FourierLoop& loop0 = start.loop;
    Engine eng(spec0.n, spec0.period, loop0.modes, family.gradient, family.hessian);
    const int m = eng.dof();

    // pin the sine partner of the dominant cosine coefficient
    int pin_mode = 1;
    double best = -1.0;
    for (int k = 1; k <= loop0.modes; ++k)
        if (loop0.mode_norm(k) > best) {
            best = loop0.mode_norm(k);
            pin_mode = k;
        }
    int pin_comp = 0;
    for (int i = 1; i < spec0.n; ++i)
        if (std::abs(loop0.ac[pin_mode - 1][i]) > std::abs(loop0.ac[pin_mode - 1][pin_comp]))
            pin_comp = i;
    const int pin = eng.dof_index(eng.sin_basis(pin_mode), pin_comp);

    Vec z = eng.pack(loop0);
    double lambda = 0.0;

    // tangent in (z, lambda); the pinned entry stays zero
    Vec tan_z(m, 0.0);
    double tan_l = static_cast<double>(direction);

    BranchRecord record;
    record.direction = direction;
    const double radius_bound = cfg.radius_bound_factor * spec0.length_scale();

    auto sample = [&](const Vec& coeffs, double lam) {
        const FourierLoop u = eng.unpack(coeffs);
        BranchSample s;
        s.lambda = lam;
        s.loop_norm = u.coeff_norm();
        s.distance_to_stationary = distance_to_stationary_set(u, spec0);
        try {
            s.isotropy_k = minimal_period_of(u, cfg.active_mode_rel_tol).isotropy_k;
        } catch (const std::domain_error&) {
            s.isotropy_k = 0;  // constant loop: fixed by the whole circle
        }
        record.samples.push_back(s);
        return s;
    };
    sample(z, lambda);

    double h = cfg.step_init;
    int steps = 0;
    while (steps < cfg.max_steps) {
        ++steps;
        // throttle towards a collapsing loop so a sample lands inside the
        // stationary detection ball instead of stepping across it
        const double amplitude = eng.unpack(z).harmonic_norm();
        const double h_eff = std::min(h, std::max(cfg.step_min, 0.5 * amplitude));
        // predictor
        Vec z_pred = z;
        for (int i = 0; i < m; ++i) z_pred[i] += h_eff * tan_z[i];
        double l_pred = lambda + h_eff * tan_l;

        // corrector on (gradient rows minus pin, arclength row)
        Vec zc = z_pred;
        double lc = l_pred;
        bool corrected = false;
        for (int it = 0; it < cfg.corrector_max_iters; ++it) {
            const Vec g = eng.gradient(zc, lc);
            double arc = tan_l * (lc - l_pred);
            for (int i = 0; i < m; ++i) arc += tan_z[i] * (zc[i] - z_pred[i]);
            double gn = eng.h1_norm(g);
            if (gn <= cfg.corrector_tol && std::abs(arc) <= cfg.corrector_tol) {
                corrected = true;
                break;
            }
            if (!std::isfinite(gn)) break;
            const Mat jac = eng.jacobian(zc, lc);
            const Vec dl = eng.dgrad_dlambda(zc, lc);
            Mat big(m, m);  // rows: gradient minus pin, arclength; cols: z minus pin, lambda
            Vec rhs(m);
            int rr = 0;
            for (int r = 0; r < m; ++r) {
                if (r == pin) continue;
                int cc = 0;
                for (int c = 0; c < m; ++c) {
                    if (c == pin) continue;
                    big.at(rr, cc++) = jac.at(r, c);
                }
                big.at(rr, m - 1) = dl[r];
                rhs[rr] = -g[r];
                ++rr;
            }
            int cc = 0;
            for (int c = 0; c < m; ++c) {
                if (c == pin) continue;
                big.at(m - 1, cc++) = tan_z[c];
            }
            big.at(m - 1, m - 1) = tan_l;
            rhs[m - 1] = -arc;
            Vec step;
            try {
                step = lu_solve(std::move(big), std::move(rhs));
            } catch (const std::runtime_error&) {
                break;
            }
            int ci = 0;
            for (int c = 0; c < m; ++c) {
                if (c == pin) continue;
                zc[c] += step[ci++];
            }
            lc += step[m - 1];
        }

        if (!corrected) {
            h *= 0.5;
            if (h < cfg.step_min) {
                record.verdict = BranchVerdict::StepFailure;
                record.note = "corrector diverged at the minimal step";
                break;
            }
            continue;
        }

        // secant tangent, orientation kept
        Vec new_tan(m, 0.0);
        double nt_l = lc - lambda;
        double len = nt_l * nt_l;
        for (int i = 0; i < m; ++i) {
            new_tan[i] = zc[i] - z[i];
            len += new_tan[i] * new_tan[i];
        }
        len = std::sqrt(len);
        if (len > 0.0) {
            double align = nt_l * tan_l;
            for (int i = 0; i < m; ++i) align += new_tan[i] * tan_z[i];
            const double flip = (align >= 0.0 ? 1.0 : -1.0);
            for (int i = 0; i < m; ++i) tan_z[i] = flip * new_tan[i] / len;
            tan_l = flip * nt_l / len;
        }

        z = zc;
        lambda = lc;
        const BranchSample s = sample(z, lambda);

        const FourierLoop u = eng.unpack(z);
        if (std::min(s.distance_to_stationary, u.harmonic_norm()) < cfg.stationary_tol) {
            record.verdict = BranchVerdict::HitStationary;
            break;
        }
        if (std::abs(lambda) > cfg.lambda_bound || s.loop_norm > radius_bound) {
            record.verdict = BranchVerdict::Unbounded;
            break;
        }
        h = std::min(h * 1.5, cfg.step_max);
    }
    if (steps >= cfg.max_steps && record.samples.size() > 1 &&
        record.verdict == BranchVerdict::StepFailure && record.note.empty())
        record.note = "step budget exhausted";

    // different isotropy groups along one connected branch
    std::set<int> seen;
    for (const auto& s : record.samples)
        if (s.isotropy_k > 0) seen.insert(s.isotropy_k);
    record.symmetry_breaking =
        seen.size() > 1 || record.verdict == BranchVerdict::HitStationary;
    return record;
}

}  // namespace perideg
