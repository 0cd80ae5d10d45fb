#pragma once

#include "qamidx/indexcode.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace qamidx {

// How snr_db_points are read. The default treats SNR as the reciprocal of the
// per-dimension noise variance with the constellation left unnormalized. The
// alternative reads the points as Es/N0: with Es = (M^2 - 1)/12 per dimension,
// the noise variance becomes Es / (2 * 10^(snr/10)).
enum class SnrConvention { noise_variance_per_dim, es_over_n0 };

std::string to_string(SnrConvention convention);
SnrConvention parse_snr_convention(const std::string& name);

// Per-coordinate offset making the transmitted constellation zero-mean:
// +1/2 for even M (symmetric set mean is -1/2), 0 for odd M.
std::vector<double> transmit_offset(const IndexCode& code);

struct ChannelConfig {
    std::vector<double> snr_db_points;
    std::uint64_t max_trials_per_point = 100000;
    // Stop a point once this many message errors accumulate, checked at batch
    // boundaries so every thread count sees the same cut. 0 disables stopping.
    std::uint64_t target_errors = 200;
    std::uint64_t seed = 0;
    SnrConvention convention = SnrConvention::noise_variance_per_dim;
    int threads = 1;
    std::uint64_t batch_size = 8192;
    std::uint64_t enumeration_cap = default_enumeration_cap;
};

struct PointResult {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t message_errors = 0;
    std::vector<std::uint64_t> per_message_errors;
    double error_rate = 0.0;
    double std_error = 0.0;
    bool early_stopped = false;
};

struct SimResult {
    Subset subset = 0;
    std::uint64_t seed = 0;
    std::string rng;
    std::string convention;
    std::vector<PointResult> points;
};

// Monte-Carlo run of the receiver holding side information subset: uniform
// messages, encode, offset, Gaussian noise, nearest-point decoding over the
// coset the side information leaves open. Bit-identical for a fixed config
// regardless of the thread count.
SimResult simulate(const IndexCode& code, Subset side_subset, const ChannelConfig& cfg);

// SNR a curve needs to reach the target error rate, by log-linear
// interpolation between the bracketing points.
double snr_at_rate(const SimResult& curve, double target_rate);

// How many more dB curve a needs than curve b to hit the target error rate.
double snr_gap_at(const SimResult& a, const SimResult& b, double target_rate);

// Capacity-limit SNR for a receiver with side information subset s under
// per-message rates: 10 log10(2^(2 delta) - 1) with delta = sum(rates) - R_S.
// A receiver already holding all the rate it lacks (delta = 0) has no minimum
// SNR; that is reported as -infinity.
double capacity_min_snr_db(const std::vector<double>& rates, Subset s);

} // namespace qamidx
