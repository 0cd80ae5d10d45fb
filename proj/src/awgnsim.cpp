#include "qamidx/awgnsim.hpp"

#include "qamidx/errors.hpp"
#include "qamidx/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qamidx {

namespace {

struct Tally {
    std::uint64_t message_errors = 0;
    std::vector<std::uint64_t> per_message;

    explicit Tally(int k) : per_message(std::size_t(k), 0) {}

    void add(const Tally& other) {
        message_errors += other.message_errors;
        for (std::size_t i = 0; i < per_message.size(); ++i)
            per_message[i] += other.per_message[i];
    }
};

// One independent trial: everything is derived from (seed, point, trial), and
// the draw order (messages, then noise) is fixed as part of the RNG identity.
void run_trial(const IndexCode& code, Subset subset, const std::vector<double>& offset,
               double sigma, std::uint64_t seed, std::uint64_t point, std::uint64_t trial,
               std::uint64_t enumeration_cap, Tally& tally) {
    const int k = code.k;
    const Modulus& m = code.modulus;
    TrialRng rng(seed, point, trial);

    IntVec w(k);
    for (int i = 0; i < k; ++i) w[i] = Int(rng.uniform_mod(std::uint64_t(m.value())));
    IntVec x = encode(code, w);

    std::vector<double> y(k);
    for (int i = 0; i < k; i += 2) {
        auto [g0, g1] = rng.gaussian_pair();
        y[i] = double(x[i]) + offset[i] + sigma * g0;
        if (i + 1 < k) y[i + 1] = double(x[i + 1]) + offset[i + 1] + sigma * g1;
    }
    // The receiver strips the known deterministic offset and decodes on the
    // plain representative grid.
    for (int i = 0; i < k; ++i) y[i] -= offset[i];

    IntVec w_dec;
    if (subset == 0) {
        w_dec = decode(code, y);
    } else {
        SideInfo side;
        side.subset = subset;
        side.values = w;
        w_dec = decode(code, y, side, enumeration_cap);
    }

    bool any_wrong = false;
    for (int i = 0; i < k; ++i) {
        if (subset_contains(subset, i + 1)) continue;
        if (symmetric_mod(w[i], m) != symmetric_mod(w_dec[i], m)) {
            ++tally.per_message[std::size_t(i)];
            any_wrong = true;
        }
    }
    if (any_wrong) ++tally.message_errors;
}

double noise_sigma(double snr_db, SnrConvention convention, Int m) {
    double lin = std::pow(10.0, snr_db / 10.0);
    if (convention == SnrConvention::noise_variance_per_dim) return std::sqrt(1.0 / lin);
    double es = (double(m) * double(m) - 1.0) / 12.0;
    return std::sqrt(es / (2.0 * lin));
}

} // namespace

std::string to_string(SnrConvention convention) {
    return convention == SnrConvention::noise_variance_per_dim ? "noise_variance_per_dim"
                                                               : "es_over_n0";
}

SnrConvention parse_snr_convention(const std::string& name) {
    if (name == "noise_variance_per_dim") return SnrConvention::noise_variance_per_dim;
    if (name == "es_over_n0") return SnrConvention::es_over_n0;
    throw std::invalid_argument("unknown SNR convention: " + name);
}

std::vector<double> transmit_offset(const IndexCode& code) {
    return std::vector<double>(std::size_t(code.k), code.modulus.even() ? 0.5 : 0.0);
}

SimResult simulate(const IndexCode& code, Subset side_subset, const ChannelConfig& cfg) {
    if ((side_subset & ~full_subset(code.k)) != 0)
        throw std::invalid_argument("side information subset has message indices beyond K");
    if (cfg.max_trials_per_point < 1)
        throw std::invalid_argument("simulation needs at least one trial per point");
    for (double snr : cfg.snr_db_points)
        if (!std::isfinite(snr)) throw std::invalid_argument("SNR points must be finite");

    // Nonempty side information decodes by coset enumeration; fail early if the
    // coset is too large rather than inside a worker thread.
    if (side_subset != 0) {
        int unknown = code.k - subset_size(side_subset);
        std::uint64_t points = 1;
        for (int i = 0; i < unknown; ++i) {
            if (points > cfg.enumeration_cap / std::uint64_t(code.modulus.value()))
                throw budget_error("coset enumeration exceeds the configured cap");
            points *= std::uint64_t(code.modulus.value());
        }
        if (points > cfg.enumeration_cap)
            throw budget_error("coset enumeration exceeds the configured cap");
    }

    const std::vector<double> offset = transmit_offset(code);
    const std::uint64_t batch = std::max<std::uint64_t>(cfg.batch_size, 1);
    const unsigned threads = cfg.threads >= 1
                                 ? unsigned(cfg.threads)
                                 : std::max(1u, std::thread::hardware_concurrency());

    SimResult result;
    result.subset = side_subset;
    result.seed = cfg.seed;
    result.rng = rng_algorithm_name;
    result.convention = to_string(cfg.convention);

    for (std::size_t pt = 0; pt < cfg.snr_db_points.size(); ++pt) {
        const double snr_db = cfg.snr_db_points[pt];
        const double sigma = noise_sigma(snr_db, cfg.convention, code.modulus.value());

        Tally total(code.k);
        std::uint64_t done = 0;
        bool stopped = false;
        while (done < cfg.max_trials_per_point) {
            std::uint64_t n = std::min(batch, cfg.max_trials_per_point - done);
            unsigned workers = unsigned(std::min<std::uint64_t>(threads, n));
            std::vector<Tally> locals(workers, Tally(code.k));
            std::uint64_t per = n / workers, extra = n % workers;
            std::vector<std::thread> pool;
            std::uint64_t at = done;
            for (unsigned wkr = 0; wkr < workers; ++wkr) {
                std::uint64_t lo = at, hi = at + per + (wkr < extra ? 1 : 0);
                at = hi;
                auto job = [&, wkr, lo, hi] {
                    for (std::uint64_t t = lo; t < hi; ++t)
                        run_trial(code, side_subset, offset, sigma, cfg.seed,
                                  std::uint64_t(pt), t, cfg.enumeration_cap, locals[wkr]);
                };
                if (workers == 1)
                    job();
                else
                    pool.emplace_back(job);
            }
            for (std::thread& th : pool) th.join();
            for (const Tally& l : locals) total.add(l);
            done += n;
            if (cfg.target_errors > 0 && total.message_errors >= cfg.target_errors &&
                done < cfg.max_trials_per_point) {
                stopped = true;
                break;
            }
        }

        PointResult point;
        point.snr_db = snr_db;
        point.trials = done;
        point.message_errors = total.message_errors;
        point.per_message_errors = total.per_message;
        point.error_rate = double(total.message_errors) / double(done);
        point.std_error = std::sqrt(point.error_rate * (1.0 - point.error_rate) / double(done));
        point.early_stopped = stopped;
        result.points.push_back(std::move(point));
    }
    return result;
}

double snr_at_rate(const SimResult& curve, double target_rate) {
    if (!(target_rate > 0.0) || !std::isfinite(target_rate))
        throw std::invalid_argument("target error rate must be positive and finite");
    for (const PointResult& p : curve.points)
        if (p.error_rate == target_rate) return p.snr_db;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        double r0 = curve.points[i].error_rate, r1 = curve.points[i + 1].error_rate;
        if (r0 <= 0.0 || r1 <= 0.0) continue;
        if ((r0 - target_rate) * (r1 - target_rate) > 0.0) continue;
        double s0 = curve.points[i].snr_db, s1 = curve.points[i + 1].snr_db;
        double t = (std::log(target_rate) - std::log(r0)) / (std::log(r1) - std::log(r0));
        return s0 + t * (s1 - s0);
    }
    throw std::invalid_argument("target error rate is not bracketed by the simulated curve");
}

double snr_gap_at(const SimResult& a, const SimResult& b, double target_rate) {
    return snr_at_rate(a, target_rate) - snr_at_rate(b, target_rate);
}

double capacity_min_snr_db(const std::vector<double>& rates, Subset s) {
    if (rates.empty()) throw std::invalid_argument("capacity needs at least one rate");
    if (rates.size() > 32 || (s & ~full_subset(int(rates.size()))) != 0)
        throw std::invalid_argument("subset has message indices beyond the rate list");
    double total = 0.0, known = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] >= 0.0) || !std::isfinite(rates[i]))
            throw std::invalid_argument("rates must be finite and nonnegative");
        total += rates[i];
        if (subset_contains(s, int(i) + 1)) known += rates[i];
    }
    double delta = total - known;
    if (delta <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(std::pow(2.0, 2.0 * delta) - 1.0);
}

} // namespace qamidx
