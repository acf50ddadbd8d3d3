// SPDX-License-Identifier: Apache-2.0

#include "sicperf/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "sicperf/specfun.hpp"

namespace sicperf {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double logsumexp_pair(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_binom(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Signed log-domain accumulator: terms are summed smallest magnitude first
// and a cancellation diagnostic (sum|t| / |sum t|) is reported.
struct signed_accumulator {
    std::vector<std::pair<int, double>> items;  // (sign, log magnitude)

    void add(int sign, double log_mag) {
        if (log_mag == neg_inf) return;
        items.emplace_back(sign, log_mag);
    }

    double total(const char* what) {
        if (items.empty()) return 0.0;
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        const double peak = items.back().second;
        double sum = 0.0;
        double sum_abs = 0.0;
        for (const auto& [sign, lm] : items) {
            const double v = std::exp(lm - peak);
            sum += sign * v;
            sum_abs += v;
        }
        if (sum != 0.0 && sum_abs / std::abs(sum) > 1e10) {
            std::cerr << "sicperf: severe cancellation in " << what
                      << " (ratio " << sum_abs / std::abs(sum) << "); result may be inaccurate\n";
        }
        return sum * std::exp(peak);
    }
};

// ---------------------------------------------------------------------------
// Coefficient expansion
// ---------------------------------------------------------------------------

// Walk all weakly decreasing lattices rho_1 >= ... >= rho_{n-1} bounded by
// rho_0, with rho_n = 0 appended, and hand each to `emit`.
template <typename F>
void lattice_recurse(std::vector<std::size_t>& rho, std::size_t t, std::size_t n, const F& emit) {
    if (t == n) {
        emit(rho);
        return;
    }
    for (std::size_t v = rho[t - 1] + 1; v-- > 0;) {
        rho[t] = v;
        lattice_recurse(rho, t + 1, n, emit);
    }
}

template <typename F>
void for_each_lattice(std::size_t n, std::size_t rho0, const F& emit) {
    // rho[n] stays 0 as the sentinel used by lattice_log_prod.
    std::vector<std::size_t> rho(n + 1, 0);
    rho[0] = rho0;
    lattice_recurse(rho, 1, n, emit);
}

// log of the lattice product 1 / prod_t [(rho_{t-1}-rho_t)! (t!)^{rho_t - rho_{t+1}}]
double lattice_log_prod(std::size_t n, const std::vector<std::size_t>& rho) {
    double lp = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        lp -= std::lgamma(static_cast<double>(rho[t - 1] - rho[t]) + 1.0);
        lp -= static_cast<double>(rho[t] - rho[t + 1]) * std::lgamma(static_cast<double>(t) + 1.0);
    }
    return lp;
}

ordered_layer_coefficients build_coefficients(std::size_t i, std::size_t n, std::size_t m,
                                              double p, ordering_strategy ordering) {
    if (i < 1 || i > m || m > n || n > 8) {
        throw std::invalid_argument("xi_coefficients: requires 1 <= i <= m <= n <= 8");
    }
    if (!(p > 0.0)) throw std::invalid_argument("xi_coefficients: requires p > 0");

    ordered_layer_coefficients out;
    out.layer = i;
    out.n = n;
    out.m = m;
    out.p = p;
    out.ordering = ordering;
    const double lp = std::log(p);

    if (ordering == ordering_strategy::fixed || m == 1) {
        // Single chi^2_{2(n-i+1)} family: f(x) = x^{n-i} e^{-x/p} / ((n-i)! p^{n-i+1}).
        coeff_term t;
        t.sign = 1;
        t.log_mag = -std::lgamma(static_cast<double>(n - i + 1) + 1.0 - 1.0) -
                    static_cast<double>(n - i + 1) * lp;
        t.exponent = static_cast<int>(n - i);
        t.rate = 1.0 / p;
        out.terms.push_back(t);
        return out;
    }

    if (i == 1) {
        const double lead = std::lgamma(static_cast<double>(m) + 1.0) -
                            std::lgamma(static_cast<double>(n));
        for_each_lattice(n, m - 1, [&](const std::vector<std::size_t>& rho) {
            std::size_t phi = 0;
            for (std::size_t t = 1; t < n; ++t) phi += rho[t];
            coeff_term t;
            t.sign = 1;
            t.log_mag = lead - std::lgamma(static_cast<double>(rho[n - 1]) + 1.0) -
                        static_cast<double>(n + phi) * lp + lattice_log_prod(n, rho);
            t.exponent = static_cast<int>(n + phi - 1);
            t.rate = static_cast<double>(m) / p;
            out.terms.push_back(t);
        });
        return out;
    }

    // i > 1
    const double log_betas = std::log(beta_real(static_cast<double>(n - i + 1),
                                                static_cast<double>(i - 1))) +
                             std::log(beta_real(static_cast<double>(m - i + 1),
                                                static_cast<double>(i)));
    for (std::size_t j = 0; j + 1 < i; ++j) {
        for (std::size_t l = 0; l < i; ++l) {
            const std::size_t rho0 = m + l - i;
            const int sign = ((j + l) % 2 == 0) ? 1 : -1;
            const double fam = log_binom(i - 2, j) + log_binom(i - 1, l) +
                               std::lgamma(static_cast<double>(m + l - i) + 1.0) -
                               std::lgamma(static_cast<double>(n)) - log_betas;
            for_each_lattice(n, rho0, [&](const std::vector<std::size_t>& rho) {
                std::size_t phi = 0;
                for (std::size_t t = 1; t < n; ++t) phi += rho[t];
                if (static_cast<long>(i + phi) - static_cast<long>(j) - 1 < 1) return;
                const double base = fam + lattice_log_prod(n, rho) -
                                    std::lgamma(static_cast<double>(rho[n - 1]) + 1.0) +
                                    std::lgamma(static_cast<double>(i + phi - j) - 1.0);
                const double lrate_base = std::log(static_cast<double>(m + l - i + 1));
                const long rmax = static_cast<long>(i) + static_cast<long>(phi) -
                                  static_cast<long>(j) - 1;  // r in 0..rmax-1
                for (long r = 0; r < rmax; ++r) {
                    coeff_term t;
                    t.sign = sign;
                    t.log_mag = base +
                                (static_cast<double>(i) - static_cast<double>(j) - r -
                                 static_cast<double>(n) - 1.0) * lp -
                                std::lgamma(static_cast<double>(r) + 1.0) -
                                (static_cast<double>(i + phi - j) - r - 1.0) * lrate_base;
                    t.exponent = static_cast<int>(static_cast<long>(n) + r +
                                                  static_cast<long>(j) - static_cast<long>(i));
                    t.rate = static_cast<double>(m + l - i + 1) / p;
                    out.terms.push_back(t);
                }
            });
        }
    }
    return out;
}

}  // namespace

const ordered_layer_coefficients& xi_coefficients(std::size_t i, std::size_t n, std::size_t m,
                                                  double p, ordering_strategy ordering) {
    using key_t = std::tuple<std::size_t, std::size_t, std::size_t, double, int>;
    static std::mutex mu;
    static std::map<key_t, std::unique_ptr<ordered_layer_coefficients>> cache;

    const key_t key{i, n, m, p, static_cast<int>(ordering)};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto built = std::make_unique<ordered_layer_coefficients>(
            build_coefficients(i, n, m, p, ordering));
        it = cache.emplace(key, std::move(built)).first;
    }
    return *it->second;
}

double rii_tail(const ordered_layer_coefficients& coeffs, double z) {
    if (z < 0.0) throw std::invalid_argument("rii_tail: requires z >= 0");
    signed_accumulator acc;
    for (const coeff_term& t : coeffs.terms) {
        const double lr = std::log(t.rate);
        const double lz = (z > 0.0) ? std::log(z) : neg_inf;
        double inner = neg_inf;  // log sum_mu z^mu / (mu! rate^{xi-mu+1})
        for (int mu = 0; mu <= t.exponent; ++mu) {
            const double lt = (mu == 0 ? 0.0 : mu * lz) - std::lgamma(mu + 1.0) -
                              (t.exponent - mu + 1.0) * lr;
            if (mu > 0 && lz == neg_inf) continue;
            inner = logsumexp_pair(inner, lt);
        }
        acc.add(t.sign, t.log_mag + std::lgamma(t.exponent + 1.0) - t.rate * z + inner);
    }
    return std::clamp(acc.total("rii_tail"), 0.0, 1.0);
}

namespace {

std::size_t zf_layer_of(const system_config& cfg, const outage_query& q) {
    if (q.index < 1 || q.index > cfg.m) throw std::invalid_argument("outage_query: index out of range");
    return (q.indexing == index_convention::decoding_layer) ? q.index : cfg.m - q.index + 1;
}

std::size_t mmse_stage_of(const system_config& cfg, const outage_query& q) {
    if (q.index < 1 || q.index > cfg.m) throw std::invalid_argument("outage_query: index out of range");
    return (q.indexing == index_convention::sic_stage) ? q.index : cfg.m - q.index + 1;
}

}  // namespace

double zf_outage(const system_config& cfg, const outage_query& q, zf_outage_mode mode) {
    cfg.validate();
    if (q.scheme != sindr_scheme::zf) throw std::invalid_argument("zf_outage: query scheme must be zf");
    if (!(q.gamma_th > 0.0)) throw std::invalid_argument("zf_outage: gamma_th must be > 0");
    const std::size_t i = zf_layer_of(cfg, q);

    const double kt = (mode == zf_outage_mode::ideal) ? 0.0 : cfg.kappa_t;
    const double kr = (mode == zf_outage_mode::ideal) ? 0.0 : cfg.kappa_r;
    const double om = (mode == zf_outage_mode::general) ? cfg.omega : 0.0;
    const double g = q.gamma_th;
    const double kt2 = kt * kt;
    if (kt2 * g >= 1.0) return 1.0;

    const ordered_layer_coefficients& coeffs =
        xi_coefficients(i, cfg.n, cfg.m, cfg.p, q.ordering);

    const double denom = 1.0 - kt2 * g;
    const double z0 = g * (cfg.p * kr * kr * static_cast<double>(cfg.m) + cfg.n0) / denom;
    const double big_a = g * cfg.p * (kt2 + 1.0) / denom;
    const double lz0 = std::log(z0);
    const double la = (big_a > 0.0) ? std::log(big_a) : neg_inf;
    const double lgm = std::lgamma(static_cast<double>(cfg.m));

    signed_accumulator acc;
    for (const coeff_term& t : coeffs.terms) {
        const double lr = std::log(t.rate);
        const double s_om = t.rate * big_a * om;  // s*omega in the Erlang average
        const double l1pso = std::log1p(s_om);
        for (int mu = 0; mu <= t.exponent; ++mu) {
            const double lpsi = t.log_mag + std::lgamma(t.exponent + 1.0) -
                                std::lgamma(mu + 1.0) - (t.exponent - mu + 1.0) * lr;
            double inner = neg_inf;
            if (om == 0.0) {
                inner = mu * lz0;
            } else {
                for (int v = 0; v <= mu; ++v) {
                    const double lt = log_binom(mu, v) + v * la + (mu - v) * lz0 +
                                      std::lgamma(v + static_cast<double>(cfg.m)) - lgm +
                                      v * std::log(om) -
                                      (v + static_cast<double>(cfg.m)) * l1pso;
                    inner = logsumexp_pair(inner, lt);
                }
            }
            acc.add(t.sign, lpsi - t.rate * z0 + inner);
        }
    }
    const double survive = acc.total("zf_outage");
    return std::clamp(1.0 - survive, 0.0, 1.0);
}

double zf_outage_floor(const system_config& cfg, const outage_query& q, zf_floor_mode mode) {
    cfg.validate();
    if (q.scheme != sindr_scheme::zf) throw std::invalid_argument("zf_outage_floor: scheme must be zf");
    if (!(q.gamma_th > 0.0)) throw std::invalid_argument("zf_outage_floor: gamma_th must be > 0");
    const std::size_t i = zf_layer_of(cfg, q);
    const std::size_t n = cfg.n;
    const std::size_t m = cfg.m;
    const double g = q.gamma_th;

    if (mode == zf_floor_mode::csi_only && (cfg.kappa_t != 0.0 || cfg.kappa_r != 0.0)) {
        throw std::invalid_argument("zf_outage_floor: csi_only requires kappa_t = kappa_r = 0");
    }
    if (mode == zf_floor_mode::hw_only && cfg.omega != 0.0) {
        throw std::invalid_argument("zf_outage_floor: hw_only requires omega = 0");
    }

    const double kt2 = cfg.kappa_t * cfg.kappa_t;
    if (kt2 * g >= 1.0) return 1.0;
    const std::size_t qexp = n - i + 1;
    const double lead = std::lgamma(static_cast<double>(m) + 1.0) +
                        (1.0 - static_cast<double>(i)) * std::log(static_cast<double>(m - i + 1)) -
                        std::lgamma(static_cast<double>(i)) -
                        std::lgamma(static_cast<double>(m - i) + 1.0) -
                        std::lgamma(static_cast<double>(qexp) + 1.0);
    const double pre = std::exp(lead) * std::pow(g / (1.0 - kt2 * g), static_cast<double>(qexp));

    if (mode == zf_floor_mode::csi_only) {
        return pre * std::exp(std::lgamma(static_cast<double>(n + m - i) + 1.0) -
                              std::lgamma(static_cast<double>(m))) *
               std::pow(cfg.omega, static_cast<double>(qexp));
    }
    if (mode == zf_floor_mode::hw_only) {
        return pre * std::pow(cfg.kappa_r * cfg.kappa_r * static_cast<double>(m),
                              static_cast<double>(qexp));
    }

    // General: binomial k-sum over the Erlang moments.
    const double krm = cfg.kappa_r * cfg.kappa_r * static_cast<double>(m);
    const double wfac = (kt2 + 1.0) * cfg.omega;
    double ksum = 0.0;
    for (std::size_t k = 0; k <= qexp; ++k) {
        ksum += std::exp(log_binom(qexp, k) +
                         (k > 0 ? k * std::log(wfac) : 0.0) +
                         ((qexp - k) > 0 ? (qexp - k) * std::log(krm) : 0.0) +
                         std::lgamma(static_cast<double>(m + k)) -
                         std::lgamma(static_cast<double>(m)));
    }
    const double value = pre * ksum;

    // Cross-check against the Tricomi-U form when its argument is defined.
    if (cfg.omega > 0.0 && krm > 0.0) {
        const double x = krm / (cfg.omega * (kt2 + 1.0));
        const double u = tricomi_u({static_cast<double>(m),
                                    static_cast<double>(n + m - i + 2), x});
        const double alt = pre * std::exp(static_cast<double>(n + m - i + 1) * std::log(krm) -
                                          static_cast<double>(m) * std::log(cfg.omega * (kt2 + 1.0))) * u;
        if (std::abs(alt - value) > 1e-8 * std::abs(value)) {
            throw std::runtime_error("zf_outage_floor: dual forms disagree (numerics bug)");
        }
    }
    return value;
}

double mmse_validity_bound(const system_config& cfg) {
    const double a1 = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega;
    if (a1 <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / a1;
}

namespace {

double mmse_outage_impl(std::size_t n, std::size_t m, std::size_t stage, double g,
                        double a, double b, double d) {
    // Validity boundary: SINDR < 1/(a-1) almost surely.
    if (a > 1.0 && g >= 1.0 / (a - 1.0)) return 1.0;
    if (stage == m) {
        const double den = 1.0 - (a - 1.0) * g;
        if (den <= 0.0) return 1.0;
        return regularized_gamma_p(static_cast<double>(n), b * g / den);
    }
    const double u = a * g / (1.0 + g / d);
    if (u >= 1.0) return 1.0;
    const double t = g / (g * (1.0 / (d * a) - 1.0) + 1.0 / a);
    const double c = b / a;
    // P = P(n, cT) + e^{-cT} * (correction double sum); the first part is the
    // regularized lower gamma, free of 1 - (1 - eps) cancellation.
    double second = 0.0;
    const double log_t = std::log(t);
    const double log_c = (c > 0.0) ? std::log(c) : neg_inf;
    for (std::size_t k2 = n - m + stage + 1; k2 <= n; ++k2) {
        for (std::size_t jj = n - k2 + 1; jj <= m - stage; ++jj) {
            const double lt = log_binom(m - stage, jj) +
                              (k2 > 1 ? (k2 - 1.0) * log_c : 0.0) +
                              (k2 + jj - 1.0) * log_t -
                              std::lgamma(static_cast<double>(k2)) -
                              static_cast<double>(m - stage) * std::log1p(t);
            second += std::exp(lt);
        }
    }
    const double p_first = regularized_gamma_p(static_cast<double>(n), c * t);
    return std::clamp(p_first + std::exp(-c * t) * second, 0.0, 1.0);
}

}  // namespace

double mmse_outage(const system_config& cfg, const outage_query& q, mmse_outage_mode mode) {
    cfg.validate();
    if (q.scheme != sindr_scheme::mmse) throw std::invalid_argument("mmse_outage: scheme must be mmse");
    if (q.ordering == ordering_strategy::foschini) {
        throw std::invalid_argument("mmse_outage: only fixed ordering has a closed form");
    }
    if (!(q.gamma_th > 0.0)) throw std::invalid_argument("mmse_outage: gamma_th must be > 0");
    const std::size_t stage = mmse_stage_of(cfg, q);

    const double kt = (mode == mmse_outage_mode::ideal) ? 0.0 : cfg.kappa_t;
    const double kr = (mode == mmse_outage_mode::ideal) ? 0.0 : cfg.kappa_r;
    const double om = (mode == mmse_outage_mode::ideal) ? 0.0 : cfg.omega;
    const double a = kt * kt * (om + 1.0) + om + 1.0;
    const double b = kr * kr * static_cast<double>(cfg.m) + cfg.n0 / cfg.p;
    const double d = 2.0 * std::sqrt(om) + 1.0;
    return mmse_outage_impl(cfg.n, cfg.m, stage, q.gamma_th, a, b, d);
}

double mmse_outage_floor(const system_config& cfg, const outage_query& q) {
    cfg.validate();
    if (q.scheme != sindr_scheme::mmse) throw std::invalid_argument("mmse_outage_floor: scheme must be mmse");
    const std::size_t stage = mmse_stage_of(cfg, q);
    const double a = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega + 1.0;
    const double b = cfg.kappa_r * cfg.kappa_r * static_cast<double>(cfg.m);  // N0/p dropped
    const double d = 2.0 * std::sqrt(cfg.omega) + 1.0;
    if (b == 0.0) {
        // Clean receiver: no floor (unless the threshold breaches validity).
        if (a > 1.0 && q.gamma_th >= 1.0 / (a - 1.0)) return 1.0;
        return 0.0;
    }
    return mmse_outage_impl(cfg.n, cfg.m, stage, q.gamma_th, a, b, d);
}

high_snr_asymptote mmse_tx_only_asymptote(const system_config& cfg, const outage_query& q) {
    cfg.validate();
    if (cfg.kappa_r != 0.0) {
        throw std::invalid_argument("mmse_tx_only_asymptote: requires kappa_r = 0");
    }
    const std::size_t stage = mmse_stage_of(cfg, q);
    const double g = q.gamma_th;
    const double a = cfg.kappa_t * cfg.kappa_t * (cfg.omega + 1.0) + cfg.omega + 1.0;
    const double d = 2.0 * std::sqrt(cfg.omega) + 1.0;

    high_snr_asymptote out;
    if (stage == cfg.m) {
        const double den = 1.0 - (a - 1.0) * g;
        if (den <= 0.0) throw std::invalid_argument("mmse_tx_only_asymptote: threshold beyond validity");
        out.diversity_order = static_cast<double>(cfg.n);
        out.coefficient = std::pow(g / den, static_cast<double>(cfg.n)) /
                          std::tgamma(static_cast<double>(cfg.n) + 1.0);
        return out;
    }
    const double t = g / (g * (1.0 / (d * a) - 1.0) + 1.0 / a);
    if (!(t > 0.0)) throw std::invalid_argument("mmse_tx_only_asymptote: threshold beyond validity");
    const std::size_t div = cfg.n - cfg.m + stage;
    out.diversity_order = static_cast<double>(div);
    out.coefficient = std::pow(1.0 / a, static_cast<double>(div)) /
                      std::tgamma(static_cast<double>(div) + 1.0) *
                      std::pow(t, static_cast<double>(cfg.n)) /
                      std::pow(1.0 + t, static_cast<double>(cfg.m - stage));
    return out;
}

}  // namespace sicperf
