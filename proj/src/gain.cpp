#include "qamidx/gain.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>
#include <stdexcept>

namespace qamidx {

namespace {

using boost::multiprecision::cpp_int;

void require_proper_nonempty(const IndexCode& code, Subset s) {
    if (s == 0) throw std::invalid_argument("gain is undefined for the empty subset");
    if ((s & ~full_subset(code.k)) != 0 || s == full_subset(code.k))
        throw std::invalid_argument("subset must be a proper subset of the messages");
}

double gain_db_of(Int d_sq, double rate) { return 10.0 * std::log10(double(d_sq)) / rate; }

} // namespace

double rate_of_subset(const IndexCode& code, Subset s) {
    if ((s & ~full_subset(code.k)) != 0)
        throw std::invalid_argument("subset contains message indices beyond K");
    return double(subset_size(s)) / double(code.k) * std::log2(double(code.modulus.value()));
}

double subset_gain_db(const IndexCode& code, Subset s) {
    require_proper_nonempty(code, s);
    return gain_db_of(subset_distance(code, s).d_sq, rate_of_subset(code, s));
}

int compare_gain(Int d1_sq, int s1_size, Int d2_sq, int s2_size) {
    if (d1_sq < 1 || d2_sq < 1 || s1_size < 1 || s2_size < 1)
        throw std::invalid_argument("gain comparison needs positive distances and subset sizes");
    cpp_int lhs = boost::multiprecision::pow(cpp_int(d1_sq), unsigned(s2_size));
    cpp_int rhs = boost::multiprecision::pow(cpp_int(d2_sq), unsigned(s1_size));
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

GainReport gamma(const IndexCode& code, bool use_symmetry) {
    const Subset full = full_subset(code.k);
    std::map<Subset, SubsetDistance> distances;

    for (Subset s = 1; s < full; ++s) {
        if (distances.count(s)) continue;
        SubsetDistance d = subset_distance(code, s);
        distances.emplace(s, d);
        if (use_symmetry && code.circulant) {
            Subset t = cyclic_shift_subset(s, code.k);
            while (t != s) {
                distances.emplace(t, SubsetDistance{t, d.d_sq, d.method});
                t = cyclic_shift_subset(t, code.k);
            }
        }
    }

    GainReport report;
    report.m = code.modulus.value();
    report.k = code.k;
    report.per_message_rate = std::log2(double(report.m)) / double(code.k);

    const SubsetDistance* best = nullptr;
    for (Subset s = 1; s < full; ++s) {
        const SubsetDistance& d = distances.at(s);
        double rate = rate_of_subset(code, s);
        report.entries.push_back(GainEntry{s, rate, d.d_sq, gain_db_of(d.d_sq, rate), d.method});
        int cmp = best == nullptr
                      ? -1
                      : compare_gain(d.d_sq, subset_size(s), best->d_sq, subset_size(best->s));
        if (cmp < 0) {
            best = &distances.at(s);
            report.argmin_subsets.clear();
            report.argmin_subsets.push_back(s);
        } else if (cmp == 0) {
            report.argmin_subsets.push_back(s);
        }
    }
    report.gamma_db = gain_db_of(best->d_sq, rate_of_subset(code, best->s));
    return report;
}

} // namespace qamidx
