// SPDX-License-Identifier: Apache-2.0

#include "sicperf/error_prop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sicperf/analytic.hpp"
#include "sicperf/specfun.hpp"

namespace sicperf {

namespace {

struct quad_budget {
    long evals = 0;
    long max_evals = 400000;
};

double simpson_adapt(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth,
                     quad_budget& budget) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    budget.evals += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || budget.evals > budget.max_evals) {
        if (std::abs(delta) > 15.0 * tol) {
            std::ostringstream os;
            os << "conditional_asep: quadrature failed to converge (estimate "
               << left + right + delta / 15.0 << ")";
            throw std::runtime_error(os.str());
        }
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
           simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    if (!(b > a)) return 0.0;
    quad_budget budget;
    // Seed with 16 panels so narrow features are not missed by the first
    // Richardson test.
    const std::size_t seed_panels = 16;
    double total = 0.0;
    const double h = (b - a) / static_cast<double>(seed_panels);
    double x0 = a;
    double f0 = f(x0);
    ++budget.evals;
    for (std::size_t k = 0; k < seed_panels; ++k) {
        const double x1 = (k + 1 == seed_panels) ? b : a + h * static_cast<double>(k + 1);
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        budget.evals += 2;
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_adapt(f, x0, x1, f0, fm, f1, whole,
                               tol / static_cast<double>(seed_panels), 40, budget);
        x0 = x1;
        f0 = f1;
    }
    return total;
}

}  // namespace

double asep_z_limit(const system_config& cfg, sindr_scheme scheme,
                    z_limit_convention convention) {
    if (scheme == sindr_scheme::zf) {
        if (cfg.kappa_t == 0.0) return std::numeric_limits<double>::infinity();
        return 1.0 / (cfg.kappa_t * cfg.kappa_t);
    }
    const double k = (convention == z_limit_convention::section6) ? cfg.kappa_r : cfg.kappa_t;
    const double den = k * k * (cfg.omega + 1.0) + cfg.omega;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / den;
}

double conditional_asep(const asep_query& q, const std::function<double(double)>& outage_fn) {
    q.mod.validate();
    const double a_const = q.mod.a_const;
    const double b_const = q.mod.b_const;
    if (!(q.z_limit >= 0.0)) throw std::invalid_argument("conditional_asep: z_limit must be >= 0");
    if (q.z_limit == 0.0) return 0.0;

    // x = u^2 turns the weight into 2 e^{-B u^2} du, removing the x^{-1/2}
    // endpoint singularity.
    const double top = std::isfinite(q.z_limit) ? std::sqrt(q.z_limit)
                                                : std::sqrt(50.0 / b_const);
    const auto integrand = [&](double u) {
        const double w = std::exp(-b_const * u * u);
        if (w == 0.0) return 0.0;
        return w * outage_fn(u * u);
    };
    const double integral = integrate_adaptive(integrand, 0.0, top, 1e-10);
    const double value = a_const * std::sqrt(b_const) / std::sqrt(M_PI) * integral;
    return std::clamp(value, 0.0, a_const / 2.0);
}

double overall_asep(const modulation_spec& mod, const std::vector<double>& per_layer_asep) {
    mod.validate();
    const std::size_t m = per_layer_asep.size();
    if (m == 0) throw std::invalid_argument("overall_asep: empty per-layer list");
    for (double v : per_layer_asep) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("overall_asep: ASEP out of [0,1]");
    }
    double sum = 0.0;
    for (std::size_t t = 1; t <= m; ++t) {
        double survive = 1.0;
        for (std::size_t l = t + 1; l <= m; ++l) survive *= 1.0 - per_layer_asep[l - 1];
        sum += static_cast<double>(t) * per_layer_asep[t - 1] * survive;
    }
    return (1.0 - 1.0 / static_cast<double>(mod.states)) / static_cast<double>(m) * sum;
}

double zf_asep_closed(const system_config& cfg, std::size_t i, const modulation_spec& mod) {
    cfg.validate();
    mod.validate();
    if (cfg.kappa_t != 0.0) throw std::invalid_argument("zf_asep_closed: requires kappa_t = 0");
    if (!(cfg.omega > 0.0)) throw std::invalid_argument("zf_asep_closed: requires omega > 0");

    const ordered_layer_coefficients& coeffs =
        xi_coefficients(i, cfg.n, cfg.m, cfg.p, ordering_strategy::foschini);
    const double b0 = cfg.p * cfg.kappa_r * cfg.kappa_r * static_cast<double>(cfg.m) + cfg.n0;
    const double bc = mod.b_const;
    const double lgm = std::lgamma(static_cast<double>(cfg.m));
    const double lp = std::log(cfg.p);
    const double lb0 = std::log(b0);
    const double lom = std::log(cfg.omega);

    // Signed log-domain accumulation (summed smallest magnitude first).
    std::vector<std::pair<int, double>> items;
    for (const coeff_term& t : coeffs.terms) {
        const double lr = std::log(t.rate);
        const double cl = t.rate * cfg.p;
        const double lcl = std::log(cl);
        for (int mu = 0; mu <= t.exponent; ++mu) {
            const double lpsi = t.log_mag + std::lgamma(t.exponent + 1.0) -
                                std::lgamma(mu + 1.0) - (t.exponent - mu + 1.0) * lr;
            for (int v = 0; v <= mu; ++v) {
                const double lcomb = std::lgamma(mu + 1.0) - std::lgamma(v + 1.0) -
                                     std::lgamma(mu - v + 1.0);
                const double x = b0 / (cfg.p * cfg.omega) + bc / (cfg.omega * cl);
                const double u = tricomi_u({mu + 0.5, mu + 1.5 - v - static_cast<double>(cfg.m), x});
                const double lmag = lpsi + lcomb + std::lgamma(v + static_cast<double>(cfg.m)) -
                                    lgm + v * lp + (mu - v) * lb0 + std::lgamma(mu + 0.5) -
                                    (mu + 0.5 - v) * lom - (mu + 0.5) * lcl + std::log(u);
                items.emplace_back(t.sign, lmag);
            }
        }
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    const double peak = items.back().second;
    double s = 0.0;
    for (const auto& [sign, lmag] : items) s += sign * std::exp(lmag - peak);
    s *= std::exp(peak);

    const double value = mod.a_const / 2.0 * (1.0 - std::sqrt(bc / M_PI) * s);
    return std::clamp(value, 0.0, mod.a_const / 2.0);
}

double mmse_asep_closed(const system_config& cfg, std::size_t i, const modulation_spec& mod) {
    cfg.validate();
    mod.validate();
    if (cfg.kappa_t != 0.0 || cfg.omega != 0.0) {
        throw std::invalid_argument("mmse_asep_closed: requires kappa_t = 0 and omega = 0");
    }
    if (i < 1 || i >= cfg.m) {
        throw std::invalid_argument(
            "mmse_asep_closed: stage must satisfy 1 <= i < m (last stage has no closed form)");
    }
    const std::size_t n = cfg.n;
    const std::size_t m = cfg.m;
    const double b = cfg.kappa_r * cfg.kappa_r * static_cast<double>(m) + cfg.n0 / cfg.p;
    const double bc = mod.b_const;

    double first = 0.0;
    for (std::size_t k1 = 1; k1 <= n; ++k1) {
        first += std::exp(std::lgamma(k1 - 0.5) + (k1 - 1.0) * std::log(b) -
                          std::lgamma(static_cast<double>(k1)) -
                          (k1 - 0.5) * std::log(b + bc));
    }
    double second = 0.0;
    for (std::size_t k2 = n - m + i + 1; k2 <= n; ++k2) {
        for (std::size_t j = n - k2 + 1; j <= m - i; ++j) {
            const double u = tricomi_u({static_cast<double>(k2 + j) - 0.5,
                                        static_cast<double>(k2 + j + i) -
                                            static_cast<double>(m) + 0.5,
                                        bc + b});
            second += std::exp(std::lgamma(static_cast<double>(m - i) + 1.0) -
                               std::lgamma(static_cast<double>(j) + 1.0) -
                               std::lgamma(static_cast<double>(m - i - j) + 1.0) +
                               (k2 - 1.0) * std::log(b) +
                               std::lgamma(static_cast<double>(k2 + j) - 0.5) -
                               std::lgamma(static_cast<double>(k2))) *
                      u;
        }
    }
    const double value = mod.a_const / 2.0 * (1.0 - std::sqrt(bc / M_PI) * (first - second));
    return std::clamp(value, 0.0, mod.a_const / 2.0);
}

}  // namespace sicperf
