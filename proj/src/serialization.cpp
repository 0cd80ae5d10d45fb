#include "qamidx/serialization.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qamidx {

namespace {

using nlohmann::json;

IntMat matrix_from_rows(const std::vector<IntVec>& flat_rows, int k, std::size_t which) {
    IntMat m(k, IntVec(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m[std::size_t(i)][std::size_t(j)] = flat_rows[which][i * k + j];
    return m;
}

} // namespace

json to_json(const IndexCode& code) {
    json j;
    j["m"] = code.modulus.value();
    j["k"] = code.k;
    if (code.circulant)
        j["first_row"] = code.c[0];
    else
        j["matrix"] = code.c;
    return j;
}

IndexCode code_from_json(const json& j) {
    const json* rec = &j;
    if (j.is_object() && j.contains("code")) rec = &j.at("code");
    if (!rec->is_object() || !rec->contains("m") || !rec->contains("k"))
        throw std::invalid_argument("code record needs \"m\" and \"k\" fields");
    Modulus m(rec->at("m").get<Int>());
    int k = rec->at("k").get<int>();
    if (rec->contains("first_row"))
        return make_circulant(m, k, rec->at("first_row").get<IntVec>());
    if (rec->contains("matrix")) return make_general(m, rec->at("matrix").get<IntMat>());
    throw std::invalid_argument("code record needs either \"first_row\" or \"matrix\"");
}

json subset_to_json(Subset s, int k) {
    json arr = json::array();
    for (int i = 1; i <= k; ++i)
        if (subset_contains(s, i)) arr.push_back(i);
    return arr;
}

Subset subset_from_json(const json& j, int k) {
    if (!j.is_array()) throw std::invalid_argument("subset must be an array of 1-based indices");
    Subset s = 0;
    for (const json& e : j) {
        int idx = e.get<int>();
        if (idx < 1 || idx > k)
            throw std::invalid_argument("subset element " + std::to_string(idx) + " outside 1.." +
                                        std::to_string(k));
        s |= Subset(1) << (idx - 1);
    }
    return s;
}

json to_json(const GainReport& report) {
    json j;
    j["m"] = report.m;
    j["k"] = report.k;
    j["per_message_rate"] = report.per_message_rate;
    j["gamma_db"] = report.gamma_db;
    json entries = json::array();
    for (const GainEntry& e : report.entries) {
        entries.push_back({{"subset", subset_to_json(e.s, report.k)},
                           {"rate_bits_per_dim", e.rate_bits_per_dim},
                           {"d_sq", e.d_sq},
                           {"gain_db", e.gain_db},
                           {"method", to_string(e.method)}});
    }
    j["entries"] = std::move(entries);
    json argmin = json::array();
    for (Subset s : report.argmin_subsets) argmin.push_back(subset_to_json(s, report.k));
    j["argmin_subsets"] = std::move(argmin);
    return j;
}

json to_json(const SearchSpec& spec) {
    return json{{"m", spec.m},
                {"k", spec.k},
                {"first_entry_policy", to_string(spec.first_entry_policy)},
                {"prune", spec.prune},
                {"threads", spec.threads},
                {"all_ties", spec.all_ties},
                {"tie_cap", spec.tie_cap},
                {"budget", spec.budget},
                {"checkpoint_path", spec.checkpoint_path},
                {"checkpoint_interval", spec.checkpoint_interval}};
}

SearchSpec search_spec_from_json(const json& j) {
    const json* rec = &j;
    if (j.is_object() && j.contains("spec")) rec = &j.at("spec");
    if (!rec->is_object() || !rec->contains("m") || !rec->contains("k"))
        throw std::invalid_argument("search spec needs \"m\" and \"k\" fields");
    SearchSpec spec;
    spec.m = rec->at("m").get<Int>();
    spec.k = rec->at("k").get<int>();
    if (rec->contains("first_entry_policy"))
        spec.first_entry_policy =
            parse_first_entry_policy(rec->at("first_entry_policy").get<std::string>());
    spec.prune = rec->value("prune", spec.prune);
    spec.threads = rec->value("threads", spec.threads);
    spec.all_ties = rec->value("all_ties", spec.all_ties);
    spec.tie_cap = rec->value("tie_cap", spec.tie_cap);
    spec.budget = rec->value("budget", spec.budget);
    spec.checkpoint_path = rec->value("checkpoint_path", spec.checkpoint_path);
    spec.checkpoint_interval = rec->value("checkpoint_interval", spec.checkpoint_interval);
    return spec;
}

json search_to_json(const SearchSpec& spec, const SearchResult& result, bool general) {
    json r;
    if (std::isfinite(result.best_gamma_db))
        r["best_gamma_db"] = result.best_gamma_db;
    else
        r["best_gamma_db"] = nullptr;
    r["best_d_sq"] = result.best_d_sq;
    r["best_subset_size"] = result.best_subset_size;
    json codes = json::array();
    for (std::size_t i = 0; i < result.best_rows.size(); ++i) {
        json code;
        code["m"] = spec.m;
        code["k"] = spec.k;
        if (general)
            code["matrix"] = matrix_from_rows(result.best_rows, spec.k, i);
        else
            code["first_row"] = result.best_rows[i];
        codes.push_back(std::move(code));
    }
    r["best_codes"] = std::move(codes);
    r["tie_count"] = result.tie_count;
    r["candidates_examined"] = result.candidates_examined;
    r["candidates_valid"] = result.candidates_valid;
    r["next_index"] = result.next_index;
    r["total_candidates"] = result.total_candidates;
    r["elapsed_seconds"] = result.elapsed_seconds;
    r["complete"] = result.complete;
    return json{{"spec", to_json(spec)}, {"result", std::move(r)}};
}

json to_json(const ChannelConfig& cfg) {
    return json{{"snr_db_points", cfg.snr_db_points},
                {"max_trials_per_point", cfg.max_trials_per_point},
                {"target_errors", cfg.target_errors},
                {"seed", cfg.seed},
                {"convention", to_string(cfg.convention)},
                {"threads", cfg.threads},
                {"batch_size", cfg.batch_size},
                {"enumeration_cap", cfg.enumeration_cap}};
}

ChannelConfig channel_config_from_json(const json& j) {
    const json* rec = &j;
    if (j.is_object() && j.contains("config")) rec = &j.at("config");
    ChannelConfig cfg;
    if (!rec->is_object()) throw std::invalid_argument("channel config must be a JSON object");
    cfg.snr_db_points = rec->value("snr_db_points", cfg.snr_db_points);
    cfg.max_trials_per_point = rec->value("max_trials_per_point", cfg.max_trials_per_point);
    cfg.target_errors = rec->value("target_errors", cfg.target_errors);
    cfg.seed = rec->value("seed", cfg.seed);
    if (rec->contains("convention"))
        cfg.convention = parse_snr_convention(rec->at("convention").get<std::string>());
    cfg.threads = rec->value("threads", cfg.threads);
    cfg.batch_size = rec->value("batch_size", cfg.batch_size);
    cfg.enumeration_cap = rec->value("enumeration_cap", cfg.enumeration_cap);
    return cfg;
}

json to_json(const SimResult& result) {
    json pts = json::array();
    for (const PointResult& p : result.points) {
        pts.push_back({{"snr_db", p.snr_db},
                       {"trials", p.trials},
                       {"message_errors", p.message_errors},
                       {"per_message_errors", p.per_message_errors},
                       {"error_rate", p.error_rate},
                       {"std_error", p.std_error},
                       {"early_stopped", p.early_stopped}});
    }
    return json{{"subset", subset_to_json(result.subset, 32)},
                {"seed", result.seed},
                {"rng", result.rng},
                {"convention", result.convention},
                {"points", std::move(pts)}};
}

std::string simulate_csv(const SimResult& result) {
    std::ostringstream out;
    out << "S,snr_db,trials,errors,rate,stderr\n";
    std::string subset;
    for (int i = 1; i <= 32; ++i) {
        if (!subset_contains(result.subset, i)) continue;
        if (!subset.empty()) subset += ';';
        subset += std::to_string(i);
    }
    for (const PointResult& p : result.points) {
        out << subset << ',' << std::setprecision(10) << p.snr_db << ',' << p.trials << ','
            << p.message_errors << ',' << std::setprecision(12) << p.error_rate << ','
            << p.std_error << '\n';
    }
    return out.str();
}

std::string render_gain_table(const GainReport& report) {
    std::ostringstream out;
    out << "M = " << report.m << ", K = " << report.k << ", per-message rate = " << std::fixed
        << std::setprecision(4) << report.per_message_rate << " b/dim\n";
    out << std::left << std::setw(12) << "S" << std::right << std::setw(8) << "R_S"
        << std::setw(8) << "d_S^2" << std::setw(10) << "gain_dB"
        << "  method\n";
    for (const GainEntry& e : report.entries) {
        out << std::left << std::setw(12) << format_subset(e.s, report.k) << std::right
            << std::fixed << std::setprecision(4) << std::setw(8) << e.rate_bits_per_dim
            << std::setw(8) << e.d_sq << std::setw(10) << e.gain_db << "  "
            << to_string(e.method) << "\n";
    }
    out << "Gamma = " << std::fixed << std::setprecision(4) << report.gamma_db << " dB (argmin:";
    for (std::size_t i = 0; i < report.argmin_subsets.size(); ++i)
        out << (i ? ", " : " ") << format_subset(report.argmin_subsets[i], report.k);
    out << ")\n";
    return out.str();
}

std::string format_row(const IntVec& row) {
    std::string s = "(";
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(row[i]);
    }
    return s + ")";
}

std::string render_search_summary(const SearchResult& result, bool general, int k) {
    std::ostringstream out;
    if (result.best_rows.empty()) {
        out << "no valid code found (examined " << result.candidates_examined << " of "
            << result.total_candidates << " candidates)\n";
        return out.str();
    }
    out << "best gamma = " << std::fixed << std::setprecision(4) << result.best_gamma_db
        << " dB  (d_S^2 = " << result.best_d_sq << ", |S| = " << result.best_subset_size
        << ", ties: " << result.tie_count << ")\n";
    for (const IntVec& row : result.best_rows) {
        if (!general) {
            out << "  first row " << format_row(row) << "\n";
        } else {
            out << "  matrix";
            for (int i = 0; i < k; ++i) {
                IntVec r(row.begin() + i * k, row.begin() + (i + 1) * k);
                out << " " << format_row(r);
            }
            out << "\n";
        }
    }
    out << "examined " << result.candidates_examined << " of " << result.total_candidates
        << " candidates (" << result.candidates_valid << " unit-determinant), "
        << std::setprecision(3) << result.elapsed_seconds << " s"
        << (result.complete ? "" : "  [incomplete]") << "\n";
    return out.str();
}

} // namespace qamidx
