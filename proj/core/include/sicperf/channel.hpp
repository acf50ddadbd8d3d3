// SPDX-License-Identifier: Apache-2.0
//
// System model: configuration scalars, Rayleigh channel + estimation-error
// sampling, impairment noises, and the received-signal relation
// y = H(s + n_T) + n_R + w.

#ifndef SICPERF_CHANNEL_HPP
#define SICPERF_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "sicperf/matcore.hpp"

namespace sicperf {

struct system_config {
    std::size_t n = 1;     // receive antennas
    std::size_t m = 1;     // transmit antennas (streams)
    double p = 1.0;        // per-antenna transmit power (linear)
    double n0 = 1.0;       // noise power N0 (linear)
    double kappa_t = 0.0;  // transmitter impairment level
    double kappa_r = 0.0;  // receiver impairment level
    double omega = 0.0;    // channel-estimation error variance

    // Throws std::invalid_argument when n < m, m < 1, p <= 0, n0 <= 0 or any
    // impairment parameter is negative. kappa in [0.08, 0.175] and omega <=
    // 0.3 are the practical ranges discussed in the literature; they are
    // advisory and not enforced here.
    void validate() const;

    double snr_db() const;
};

struct channel_realization {
    complex_matrix h;        // true channel H, n x m
    complex_matrix delta_h;  // estimation error, n x m
    complex_matrix h_hat;    // receiver-side estimate H + delta_h
};

struct modulation_spec {
    std::size_t states = 2;     // constellation size M
    double a_const = 1.0;       // modulation constant A in the ASEP model
    double b_const = 1.0;       // modulation constant B in the ASEP model
    std::vector<cplx> points;   // unit-average-energy symbols

    void validate() const;
};

// BPSK with the Gaussian-tail constants A = B = 1 (averages Q(sqrt(2x))).
modulation_spec bpsk();

// Deterministic Gaussian stream. Uses splitmix64 for the integer stream and
// Box-Muller for normals so that results are bit-stable across platforms
// (std::normal_distribution is not).
class gauss_stream {
public:
    explicit gauss_stream(std::uint64_t seed);

    // Per-trial substream derivation for counter-based parallel Monte-Carlo.
    static gauss_stream for_trial(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next_u64();
    double uniform();   // [0, 1)
    double normal();    // standard normal
    cplx cnormal(double variance);  // circular complex, E|z|^2 = variance

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct noise_flags {
    bool transmit_distortion = true;
    bool receive_distortion = true;
    bool thermal = true;
};

// One draw of (H, delta_H, H_hat). H entries are CN(0,1); delta_H entries are
// CN(0, omega) independent of H; omega = 0 gives delta_H identically zero.
channel_realization sample_realization(const system_config& cfg, gauss_stream& rng);

// y = H(s + n_T) + n_R + w for a symbol vector with E[s s^H] = p I_m.
// The noise_flags overload suppresses individual noise terms; it exists for
// tests and debug probes, the default samples everything.
std::vector<cplx> sample_received(const system_config& cfg, const channel_realization& real,
                                  const std::vector<cplx>& s, gauss_stream& rng);
std::vector<cplx> sample_received(const system_config& cfg, const channel_realization& real,
                                  const std::vector<cplx>& s, gauss_stream& rng,
                                  const noise_flags& flags);

// Uniform draw from the constellation scaled by sqrt(p).
std::vector<cplx> sample_symbols(const system_config& cfg, const modulation_spec& mod,
                                 gauss_stream& rng);

}  // namespace sicperf

#endif
