#include "qamidx/search.hpp"

#include "qamidx/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace qamidx {

namespace {

using nlohmann::json;

constexpr std::uint64_t kNoLimit = std::numeric_limits<std::uint64_t>::max();

struct GainPair {
    Int d_sq = 0;
    int s_size = 0;
};

// Running best over a candidate range: the exact binding pair, the total number
// of generators attaining it, and their vectors (capped, lexicographically
// smallest kept).
struct BestState {
    bool has = false;
    GainPair pair;
    std::uint64_t tie_count = 0;
    std::vector<IntVec> rows;
};

void cap_rows_sorted(std::vector<IntVec>& rows, std::size_t cap) {
    std::sort(rows.begin(), rows.end());
    if (rows.size() > cap) rows.resize(cap);
}

void merge_state(BestState& global, BestState&& local, std::size_t row_cap) {
    if (!local.has) return;
    int cmp = !global.has ? 1
                          : compare_gain(local.pair.d_sq, local.pair.s_size,
                                         global.pair.d_sq, global.pair.s_size);
    if (cmp > 0) {
        global = std::move(local);
    } else if (cmp == 0) {
        global.tie_count += local.tie_count;
        global.rows.insert(global.rows.end(), local.rows.begin(), local.rows.end());
    } else {
        return;
    }
    cap_rows_sorted(global.rows, row_cap);
}

// Monotone bound shared between workers. Staleness is harmless: the bound is
// always the gamma of some fully evaluated candidate, so pruning (strictly
// below the bound) can never discard a generator that ties the maximum.
class SharedBound {
  public:
    bool load(GainPair& out) {
        std::lock_guard<std::mutex> lock(mu_);
        out = pair_;
        return has_;
    }
    void improve(GainPair p) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!has_ || compare_gain(p.d_sq, p.s_size, pair_.d_sq, pair_.s_size) > 0) {
            pair_ = p;
            has_ = true;
        }
    }

  private:
    std::mutex mu_;
    bool has_ = false;
    GainPair pair_;
};

std::uint64_t pow_or_throw(Int base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        unsigned __int128 next = (unsigned __int128)r * (std::uint64_t)base;
        if (next > kNoLimit)
            throw budget_error("candidate space does not fit a 64-bit index");
        r = (std::uint64_t)next;
    }
    return r;
}

// Maps a flat candidate index to a generator vector. The first entry runs over
// the policy values (slowest), the remaining entries over the symmetric
// representative set in ascending order.
struct CandidateSpace {
    Modulus mod;
    int k;
    int vec_len;
    bool general;
    std::vector<Int> first_values;
    std::uint64_t tail_count;
    std::uint64_t total;

    CandidateSpace(const SearchSpec& spec, bool general_matrices)
        : mod(spec.m), k(spec.k), vec_len(general_matrices ? spec.k * spec.k : spec.k),
          general(general_matrices) {
        if (spec.k < 2) throw std::invalid_argument("search needs K >= 2");
        if (spec.first_entry_policy == FirstEntryPolicy::orbit_representatives) {
            for (Int v : orbit_representatives(mod))
                first_values.push_back(symmetric_mod(v, mod));
        } else {
            for (Int v = mod.sym_min(); v <= mod.sym_max(); ++v) first_values.push_back(v);
        }
        tail_count = pow_or_throw(mod.value(), vec_len - 1);
        unsigned __int128 t = (unsigned __int128)first_values.size() * tail_count;
        if (t > kNoLimit) throw budget_error("candidate space does not fit a 64-bit index");
        total = (std::uint64_t)t;
    }

    IntVec decode(std::uint64_t idx) const {
        IntVec v(vec_len);
        v[0] = first_values[idx / tail_count];
        std::uint64_t r = idx % tail_count;
        for (int j = vec_len - 1; j >= 1; --j) {
            v[j] = mod.sym_min() + Int(r % (std::uint64_t)mod.value());
            r /= (std::uint64_t)mod.value();
        }
        return v;
    }

    IndexCode make(const IntVec& v) const {
        if (!general) return make_circulant(mod, k, v);
        IntMat c(k, IntVec(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) c[i][j] = v[i * k + j];
        return make_general(mod, c);
    }
};

// One subset per distance class: cyclic-shift orbits collapse for circulant
// codes, every proper nonempty subset stands alone otherwise.
std::vector<Subset> subset_class_reps(int k, bool circulant) {
    std::vector<Subset> reps;
    const Subset full = full_subset(k);
    for (Subset s = 1; s < full; ++s) {
        if (circulant) {
            bool minimal = true;
            Subset t = cyclic_shift_subset(s, k);
            while (t != s) {
                if (t < s) {
                    minimal = false;
                    break;
                }
                t = cyclic_shift_subset(t, k);
            }
            if (!minimal) continue;
        }
        reps.push_back(s);
    }
    return reps;
}

// Exact gamma of one candidate, or nullopt when pruning proves it strictly
// below the bound.
std::optional<GainPair> evaluate(const IndexCode& code, const std::vector<Subset>& reps,
                                 bool prune, bool has_bound, const GainPair& bound) {
    std::optional<GainPair> mn;
    for (Subset s : reps) {
        Int d = subset_distance(code, s).d_sq;
        int size = subset_size(s);
        if (prune && has_bound && compare_gain(d, size, bound.d_sq, bound.s_size) < 0)
            return std::nullopt;
        if (!mn || compare_gain(d, size, mn->d_sq, mn->s_size) < 0) mn = GainPair{d, size};
    }
    return mn;
}

void run_block(const CandidateSpace& space, const std::vector<Subset>& reps, bool prune,
               std::uint64_t lo, std::uint64_t hi, SharedBound& shared, BestState& local,
               std::uint64_t& valid) {
    GainPair bound;
    bool has_bound = shared.load(bound);
    int since_refresh = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
        if (++since_refresh >= 32) {
            has_bound = shared.load(bound);
            since_refresh = 0;
        }
        std::optional<IndexCode> code;
        try {
            code = space.make(space.decode(i));
        } catch (const invalid_code_error&) {
            continue;
        }
        ++valid;
        std::optional<GainPair> g = evaluate(*code, reps, prune, has_bound, bound);
        if (!g) continue;
        int cmp = !local.has ? 1
                             : compare_gain(g->d_sq, g->s_size, local.pair.d_sq,
                                            local.pair.s_size);
        if (cmp > 0) {
            local.has = true;
            local.pair = *g;
            local.tie_count = 1;
            local.rows.assign(1, space.decode(i));
            shared.improve(*g);
            has_bound = shared.load(bound);
        } else if (cmp == 0) {
            ++local.tie_count;
            local.rows.push_back(space.decode(i));
        }
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t spec_hash(const SearchSpec& spec, bool general) {
    std::string s = std::string(general ? "general" : "circulant") + ";m=" +
                    std::to_string(spec.m) + ";k=" + std::to_string(spec.k) +
                    ";policy=" + to_string(spec.first_entry_policy);
    return fnv1a(s);
}

struct ResumeState {
    std::uint64_t next_index = 0;
    std::uint64_t valid = 0;
    BestState best;
};

void save_checkpoint(const std::string& path, std::uint64_t hash, std::uint64_t total,
                     const ResumeState& st) {
    json j;
    j["spec_hash"] = hash;
    j["total_candidates"] = total;
    j["next_index"] = st.next_index;
    j["candidates_examined"] = st.next_index;
    j["candidates_valid"] = st.valid;
    if (st.best.has) {
        json rows = json::array();
        for (const IntVec& r : st.best.rows) rows.push_back(r);
        j["best"] = {{"d_sq", st.best.pair.d_sq},
                     {"subset_size", st.best.pair.s_size},
                     {"tie_count", st.best.tie_count},
                     {"rows", rows}};
    } else {
        j["best"] = nullptr;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint file " + tmp);
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

ResumeState load_checkpoint(const std::string& path, std::uint64_t hash, std::uint64_t total) {
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        throw std::invalid_argument("checkpoint file " + path + " is not valid JSON");
    }
    if (!j.contains("spec_hash") || j["spec_hash"].get<std::uint64_t>() != hash ||
        j.value("total_candidates", kNoLimit) != total)
        throw std::invalid_argument("checkpoint file " + path +
                                    " was written for a different search spec");
    ResumeState st;
    st.next_index = j.at("next_index").get<std::uint64_t>();
    st.valid = j.at("candidates_valid").get<std::uint64_t>();
    if (st.next_index > total || st.valid > st.next_index ||
        j.value("candidates_examined", st.next_index) != st.next_index)
        throw std::invalid_argument("checkpoint file " + path + " holds inconsistent progress");
    if (!j.at("best").is_null()) {
        const json& b = j.at("best");
        st.best.has = true;
        st.best.pair.d_sq = b.at("d_sq").get<Int>();
        st.best.pair.s_size = b.at("subset_size").get<int>();
        st.best.tie_count = b.at("tie_count").get<std::uint64_t>();
        for (const json& r : b.at("rows")) st.best.rows.push_back(r.get<IntVec>());
        if (st.best.pair.d_sq < 1 || st.best.pair.s_size < 1 || st.best.rows.empty())
            throw std::invalid_argument("checkpoint file " + path + " holds an invalid best state");
    }
    return st;
}

SearchResult run_search(const SearchSpec& spec, bool general) {
    auto t0 = std::chrono::steady_clock::now();
    CandidateSpace space(spec, general);
    std::vector<Subset> reps = subset_class_reps(spec.k, !general);
    std::size_t tie_cap = std::max<std::size_t>(spec.tie_cap, 1);
    std::size_t row_cap = std::max<std::size_t>(tie_cap, 256);
    std::uint64_t hash = spec_hash(spec, general);

    ResumeState st;
    bool checkpointing = !spec.checkpoint_path.empty();
    if (checkpointing && std::filesystem::exists(spec.checkpoint_path))
        st = load_checkpoint(spec.checkpoint_path, hash, space.total);

    SharedBound shared;
    if (st.best.has) shared.improve(st.best.pair);

    unsigned T = spec.threads >= 1 ? unsigned(spec.threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t remaining_budget = spec.budget;
    std::uint64_t chunk_size = checkpointing
                                   ? std::max<std::uint64_t>(spec.checkpoint_interval, 1)
                                   : kNoLimit;

    while (st.next_index < space.total && remaining_budget > 0) {
        std::uint64_t chunk = std::min({space.total - st.next_index, remaining_budget, chunk_size});
        std::uint64_t lo = st.next_index;
        unsigned workers = unsigned(std::min<std::uint64_t>(T, chunk));
        std::vector<BestState> locals(workers);
        std::vector<std::uint64_t> valids(workers, 0);
        std::uint64_t per = chunk / workers, extra = chunk % workers;
        std::vector<std::thread> pool;
        std::uint64_t at = lo;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t len = per + (w < extra ? 1 : 0);
            std::uint64_t wlo = at, whi = at + len;
            at = whi;
            auto job = [&, w, wlo, whi] {
                run_block(space, reps, spec.prune, wlo, whi, shared, locals[w], valids[w]);
            };
            if (workers == 1)
                job();
            else
                pool.emplace_back(job);
        }
        for (std::thread& th : pool) th.join();
        for (unsigned w = 0; w < workers; ++w) {
            merge_state(st.best, std::move(locals[w]), row_cap);
            st.valid += valids[w];
        }
        st.next_index += chunk;
        remaining_budget -= chunk;
        if (checkpointing) save_checkpoint(spec.checkpoint_path, hash, space.total, st);
    }

    SearchResult res;
    res.candidates_examined = st.next_index;
    res.candidates_valid = st.valid;
    res.next_index = st.next_index;
    res.total_candidates = space.total;
    res.complete = st.next_index == space.total;
    if (st.best.has) {
        res.best_d_sq = st.best.pair.d_sq;
        res.best_subset_size = st.best.pair.s_size;
        double rate = double(st.best.pair.s_size) / double(spec.k) *
                      std::log2(double(spec.m));
        res.best_gamma_db = 10.0 * std::log10(double(st.best.pair.d_sq)) / rate;
        res.tie_count = st.best.tie_count;
        std::size_t keep = spec.all_ties ? std::min(tie_cap, st.best.rows.size())
                                         : std::min<std::size_t>(1, st.best.rows.size());
        res.best_rows.assign(st.best.rows.begin(), st.best.rows.begin() + keep);
    }
    res.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace

std::string to_string(FirstEntryPolicy policy) {
    return policy == FirstEntryPolicy::orbit_representatives ? "orbit_representatives" : "all";
}

FirstEntryPolicy parse_first_entry_policy(const std::string& name) {
    if (name == "orbit_representatives" || name == "orbit")
        return FirstEntryPolicy::orbit_representatives;
    if (name == "all") return FirstEntryPolicy::all;
    throw std::invalid_argument("unknown first-entry policy: " + name);
}

std::vector<Int> orbit_representatives(const Modulus& m) {
    std::vector<Int> reps;
    for (Int d = 1; d < m.value(); ++d)
        if (m.value() % d == 0) reps.push_back(d);
    reps.push_back(0);
    return reps;
}

SearchResult search_circulant(const SearchSpec& spec) { return run_search(spec, false); }

SearchResult search_general(const SearchSpec& spec) { return run_search(spec, true); }

} // namespace qamidx
