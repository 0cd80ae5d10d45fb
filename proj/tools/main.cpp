#include "qamidx/errors.hpp"
#include "qamidx/serialization.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace qamidx;
using nlohmann::json;

IntVec parse_int_list(const std::string& text) {
    IntVec out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::string t;
        for (char c : tok)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(t, &pos));
            if (pos != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer '" + t + "' in list '" + text + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::string t;
        for (char c : tok)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(t, &pos));
            if (pos != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + t + "' in list '" + text + "'");
        }
    }
    return out;
}

IntMat parse_matrix(const std::string& text) {
    IntMat rows;
    std::stringstream in(text);
    std::string row;
    while (std::getline(in, row, ';')) rows.push_back(parse_int_list(row));
    return rows;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open JSON file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("cannot parse " + path + ": " + e.what());
    }
    return j;
}

int env_threads() {
    if (const char* v = std::getenv("QAMIDX_THREADS")) {
        try {
            int t = std::stoi(v);
            if (t >= 1) return t;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("QAMIDX_THREADS must be a positive integer");
    }
    return 1;
}

// Shared code-source options: -M/-K with --row or --matrix, or a JSON record
// (possibly a whole emitted envelope) via --json-in.
struct CodeArgs {
    Int m = 0;
    int k = 0;
    std::string row, matrix, json_in;
    CLI::Option *m_opt = nullptr, *k_opt = nullptr;

    void attach(CLI::App* cmd) {
        m_opt = cmd->add_option("-M,--modulus", m, "alphabet size M (>= 2)");
        k_opt = cmd->add_option("-K,--messages", k, "number of messages K (>= 2)");
        cmd->add_option("--row", row, "first row of a circulant code, e.g. 1,-2");
        cmd->add_option("--matrix", matrix, "full matrix, rows ';'-separated, e.g. 1,0;1,1");
        cmd->add_option("--json-in", json_in, "JSON file with a code record or emitted envelope");
    }

    IndexCode resolve(std::optional<json>* envelope_out = nullptr) const {
        if (!json_in.empty()) {
            json j = read_json_file(json_in);
            if (envelope_out) *envelope_out = j;
            IndexCode code = code_from_json(j);
            if (m_opt->count() > 0 && m != code.modulus.value())
                throw std::invalid_argument("-M contradicts the code in " + json_in);
            if (k_opt->count() > 0 && k != code.k)
                throw std::invalid_argument("-K contradicts the code in " + json_in);
            return code;
        }
        if (m_opt->count() == 0 || k_opt->count() == 0)
            throw std::invalid_argument("give -M and -K (or --json-in)");
        if (!row.empty() && !matrix.empty())
            throw std::invalid_argument("--row and --matrix are mutually exclusive");
        if (!row.empty()) return make_circulant(Modulus(m), k, parse_int_list(row));
        if (!matrix.empty()) {
            IntMat c = parse_matrix(matrix);
            if (int(c.size()) != k)
                throw std::invalid_argument("--matrix must have K rows");
            return make_general(Modulus(m), c);
        }
        throw std::invalid_argument("give --row, --matrix, or --json-in");
    }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_eval(const CodeArgs& args, bool as_json) {
    IndexCode code = args.resolve();
    GainReport report = gamma(code);
    if (as_json)
        emit(json{{"code", to_json(code)}, {"report", to_json(report)}});
    else
        std::cout << render_gain_table(report);
    return 0;
}

struct SearchArgs {
    SearchSpec spec;
    std::string policy = "orbit_representatives";
    std::string json_in;
    bool general = false, resume = false, as_json = false, no_prune = false;
    CLI::Option *policy_opt, *threads_opt, *ties_opt, *tiecap_opt, *budget_opt, *ckpt_opt,
        *interval_opt, *m_opt, *k_opt;
};

int run_search(SearchArgs& a) {
    if (!a.json_in.empty()) {
        SearchSpec from_file = search_spec_from_json(read_json_file(a.json_in));
        if (a.m_opt->count() == 0) a.spec.m = from_file.m;
        if (a.k_opt->count() == 0) a.spec.k = from_file.k;
        if (a.policy_opt->count() == 0) a.spec.first_entry_policy = from_file.first_entry_policy;
        if (a.threads_opt->count() == 0) a.spec.threads = from_file.threads;
        if (a.ties_opt->count() == 0) a.spec.all_ties = from_file.all_ties;
        if (a.tiecap_opt->count() == 0) a.spec.tie_cap = from_file.tie_cap;
        if (a.budget_opt->count() == 0) a.spec.budget = from_file.budget;
        if (a.ckpt_opt->count() == 0) a.spec.checkpoint_path = from_file.checkpoint_path;
        if (a.interval_opt->count() == 0) a.spec.checkpoint_interval = from_file.checkpoint_interval;
        if (!a.no_prune) a.spec.prune = from_file.prune;
    }
    if (a.policy_opt->count() > 0 || a.json_in.empty())
        a.spec.first_entry_policy = parse_first_entry_policy(a.policy);
    if (a.no_prune) a.spec.prune = false;
    if (a.resume && a.spec.checkpoint_path.empty())
        throw std::invalid_argument("--resume needs --checkpoint FILE");

    SearchResult result = a.general ? search_general(a.spec) : search_circulant(a.spec);
    if (a.as_json)
        emit(search_to_json(a.spec, result, a.general));
    else
        std::cout << render_search_summary(result, a.general, a.spec.k);
    if (!result.complete) {
        if (a.spec.checkpoint_path.empty()) {
            std::cerr << "search stopped at candidate " << result.next_index << " of "
                      << result.total_candidates
                      << " with no checkpoint; progress is lost. Pass --checkpoint FILE to make "
                         "budgeted runs resumable.\n";
            return 3;
        }
        std::cerr << "search incomplete (" << result.next_index << " of "
                  << result.total_candidates << "); rerun the same command to resume from "
                  << a.spec.checkpoint_path << "\n";
    }
    return 0;
}

struct SimulateArgs {
    CodeArgs code_args;
    std::string subset_text, snr_text;
    ChannelConfig cfg;
    bool es_n0 = false, as_json = false, as_csv = false;
    CLI::Option *subset_opt, *snr_opt, *trials_opt, *errors_opt, *seed_opt, *threads_opt,
        *batch_opt, *cap_opt;
};

int run_simulate(SimulateArgs& a) {
    std::optional<json> envelope;
    IndexCode code = a.code_args.resolve(&envelope);

    ChannelConfig cfg;
    bool seed_known = false;
    Subset subset = 0;
    if (envelope && envelope->is_object() && envelope->contains("config")) {
        cfg = channel_config_from_json(*envelope);
        seed_known = envelope->at("config").contains("seed");
    }
    if (envelope && envelope->is_object() && envelope->contains("subset"))
        subset = subset_from_json(envelope->at("subset"), code.k);

    if (a.snr_opt->count() > 0) cfg.snr_db_points = parse_double_list(a.snr_text);
    if (a.subset_opt->count() > 0) subset = parse_subset(a.subset_text, code.k);
    if (a.trials_opt->count() > 0) cfg.max_trials_per_point = a.cfg.max_trials_per_point;
    if (a.errors_opt->count() > 0) cfg.target_errors = a.cfg.target_errors;
    if (a.seed_opt->count() > 0) {
        cfg.seed = a.cfg.seed;
        seed_known = true;
    }
    cfg.threads = a.threads_opt->count() > 0 ? a.cfg.threads : env_threads();
    if (a.batch_opt->count() > 0) cfg.batch_size = a.cfg.batch_size;
    if (a.cap_opt->count() > 0) cfg.enumeration_cap = a.cfg.enumeration_cap;
    if (a.es_n0) cfg.convention = SnrConvention::es_over_n0;

    if (cfg.snr_db_points.empty())
        throw std::invalid_argument("give at least one SNR point via --snr");
    if (!seed_known)
        throw std::invalid_argument(
            "simulate needs an explicit --seed so runs are reproducible by construction");

    SimResult result = simulate(code, subset, cfg);
    if (a.as_csv) {
        std::cout << simulate_csv(result);
    } else if (a.as_json) {
        emit(json{{"code", to_json(code)},
                  {"subset", subset_to_json(subset, code.k)},
                  {"config", to_json(cfg)},
                  {"result", to_json(result)}});
    } else {
        std::cout << "S = " << format_subset(subset, code.k) << ", seed = " << cfg.seed
                  << ", rng = " << result.rng << ", convention = " << result.convention << "\n";
        std::cout << std::left << std::setw(10) << "snr_db" << std::right << std::setw(10)
                  << "trials" << std::setw(10) << "errors" << std::setw(14) << "rate"
                  << std::setw(12) << "stderr" << "  early\n";
        for (const PointResult& p : result.points) {
            std::cout << std::left << std::setw(10) << p.snr_db << std::right << std::setw(10)
                      << p.trials << std::setw(10) << p.message_errors << std::setw(14)
                      << std::scientific << std::setprecision(3) << p.error_rate << std::setw(12)
                      << p.std_error << std::defaultfloat << "  "
                      << (p.early_stopped ? "yes" : "no") << "\n";
        }
    }
    return 0;
}

int run_codec_encode(const CodeArgs& args, const std::string& message_text, bool as_json) {
    IndexCode code = args.resolve();
    IntVec w = parse_int_list(message_text);
    if (int(w.size()) != code.k)
        throw std::invalid_argument("--message needs exactly K integers");
    IntVec x = encode(code, w);
    if (as_json)
        emit(json{{"code", to_json(code)}, {"message", w}, {"codeword", x}});
    else
        std::cout << format_row(x) << "\n";
    return 0;
}

int run_codec_decode(const CodeArgs& args, const std::string& y_text,
                     const std::string& subset_text, const std::string& values_text,
                     bool as_json) {
    IndexCode code = args.resolve();
    std::vector<double> y = parse_double_list(y_text);
    if (int(y.size()) != code.k) throw std::invalid_argument("--y needs exactly K numbers");
    Subset subset = parse_subset(subset_text, code.k);
    IntVec values = parse_int_list(values_text);
    if (values.size() != std::size_t(subset_size(subset)))
        throw std::invalid_argument("--values needs one integer per subset element");
    IntVec w;
    if (subset == 0) {
        w = decode(code, y);
    } else {
        SideInfo side;
        side.subset = subset;
        side.values.assign(std::size_t(code.k), 0);
        std::size_t at = 0;
        for (int i = 1; i <= code.k; ++i)
            if (subset_contains(subset, i)) side.values[std::size_t(i - 1)] = values[at++];
        w = decode(code, y, side);
    }
    if (as_json)
        emit(json{{"code", to_json(code)},
                  {"y", y},
                  {"subset", subset_to_json(subset, code.k)},
                  {"values", values},
                  {"message", w}});
    else
        std::cout << format_row(w) << "\n";
    return 0;
}

int run_capacity(const std::string& rates_text, const std::string& subset_text,
                 const std::string& json_in, int k_flag, bool k_given, bool subset_given,
                 bool rates_given, bool as_json) {
    std::vector<double> rates;
    Subset subset = 0;
    if (!json_in.empty()) {
        json j = read_json_file(json_in);
        if (!j.is_object() || !j.contains("rates"))
            throw std::invalid_argument("capacity --json-in needs a \"rates\" array");
        rates = j.at("rates").get<std::vector<double>>();
        if (j.contains("subset")) subset = subset_from_json(j.at("subset"), int(rates.size()));
    }
    if (rates_given) rates = parse_double_list(rates_text);
    if (rates.empty()) throw std::invalid_argument("give per-message rates via --rates");
    if (k_given && k_flag != int(rates.size()))
        throw std::invalid_argument("-K contradicts the number of rates");
    if (subset_given) subset = parse_subset(subset_text, int(rates.size()));

    double snr = capacity_min_snr_db(rates, subset);
    bool unbounded = !std::isfinite(snr);
    if (as_json) {
        json j{{"rates", rates},
               {"subset", subset_to_json(subset, int(rates.size()))},
               {"no_minimum", unbounded}};
        j["min_snr_db"] = unbounded ? json(nullptr) : json(snr);
        emit(j);
    } else if (unbounded) {
        std::cout << "no minimum SNR: the side information already covers the full rate\n";
    } else {
        std::cout << "minimum SNR = " << std::fixed << std::setprecision(4) << snr << " dB\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Z_M-linear index codes on multidimensional QAM: evaluation, search, codec, "
                 "simulation, capacity"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand("eval", "per-subset gains and Gamma of one code");
    CodeArgs eval_code;
    eval_code.attach(eval);
    bool eval_json = false;
    eval->add_flag("--json", eval_json, "emit the full report as JSON");

    // search
    auto* search = app.add_subcommand("search", "exhaustive search for the best code");
    SearchArgs sa;
    sa.m_opt = search->add_option("-M,--modulus", sa.spec.m, "alphabet size M (>= 2)");
    sa.k_opt = search->add_option("-K,--messages", sa.spec.k, "number of messages K (>= 2)");
    sa.policy_opt = search->add_option("--policy", sa.policy,
                                       "first entry policy: orbit_representatives|all");
    sa.threads_opt = search->add_option("--threads", sa.spec.threads, "worker threads");
    search->add_flag("--no-prune", sa.no_prune, "disable early-exit pruning");
    sa.ties_opt = search->add_flag("--all-ties", sa.spec.all_ties, "list every tying generator");
    sa.tiecap_opt = search->add_option("--tie-cap", sa.spec.tie_cap, "cap on listed ties");
    sa.budget_opt = search->add_option("--budget", sa.spec.budget,
                                       "max candidates to examine this run");
    sa.ckpt_opt = search->add_option("--checkpoint", sa.spec.checkpoint_path,
                                     "JSON progress file; existing state is resumed");
    sa.interval_opt = search->add_option("--checkpoint-interval", sa.spec.checkpoint_interval,
                                         "candidates between checkpoint saves");
    search->add_flag("--resume", sa.resume, "resume from --checkpoint (same as rerunning)");
    search->add_flag("--general", sa.general,
                     "search all K-by-K matrices, not only circulant ones (tiny M, K only)");
    search->add_option("--json-in", sa.json_in, "JSON file with a search spec or emitted output");
    search->add_flag("--json", sa.as_json, "emit spec and result as JSON");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "seeded broadcast channel simulation");
    SimulateArgs sim;
    sim.code_args.attach(simulate_cmd);
    sim.subset_opt = simulate_cmd->add_option("--subset", sim.subset_text,
                                              "side information, e.g. \"1,3\" (\"\" = none)");
    sim.snr_opt = simulate_cmd->add_option("--snr", sim.snr_text, "SNR points in dB, e.g. 6,8,10");
    sim.trials_opt = simulate_cmd->add_option("--trials", sim.cfg.max_trials_per_point,
                                              "max trials per SNR point");
    sim.errors_opt = simulate_cmd->add_option("--target-errors", sim.cfg.target_errors,
                                              "stop a point after this many errors (0 = never)");
    sim.seed_opt = simulate_cmd->add_option("--seed", sim.cfg.seed, "RNG seed (required)");
    sim.threads_opt = simulate_cmd->add_option("--threads", sim.cfg.threads, "worker threads");
    sim.batch_opt = simulate_cmd->add_option("--batch", sim.cfg.batch_size,
                                             "trials per early-stopping batch");
    sim.cap_opt = simulate_cmd->add_option("--enumeration-cap", sim.cfg.enumeration_cap,
                                           "max coset points the decoder may enumerate");
    simulate_cmd->add_flag("--es-n0", sim.es_n0,
                           "read SNR points as Es/N0 with Es = (M^2-1)/12 per dimension");
    simulate_cmd->add_flag("--json", sim.as_json, "emit config echo and result as JSON");
    simulate_cmd->add_flag("--csv", sim.as_csv, "emit S,snr_db,trials,errors,rate,stderr CSV");

    // codec
    auto* codec = app.add_subcommand("codec", "encode and decode single vectors");
    codec->require_subcommand(1);
    auto* enc = codec->add_subcommand("encode", "map a message tuple to its codeword");
    CodeArgs enc_code;
    enc_code.attach(enc);
    std::string enc_message;
    bool enc_json = false;
    enc->add_option("--message", enc_message, "message tuple, e.g. 1,0")->required();
    enc->add_flag("--json", enc_json, "emit JSON");
    auto* dec = codec->add_subcommand("decode", "nearest-codeword decode a received vector");
    CodeArgs dec_code;
    dec_code.attach(dec);
    std::string dec_y, dec_subset, dec_values;
    bool dec_json = false;
    dec->add_option("--y", dec_y, "received vector, e.g. 1.1,-1.9")->required();
    dec->add_option("--subset", dec_subset, "side information subset, e.g. 1,3");
    dec->add_option("--values", dec_values, "known message values, one per subset element");
    dec->add_flag("--json", dec_json, "emit JSON");

    // capacity
    auto* capacity = app.add_subcommand("capacity", "capacity-limit SNR of a receiver");
    std::string cap_rates, cap_subset, cap_json_in;
    int cap_k = 0;
    bool cap_json = false;
    auto* cap_rates_opt = capacity->add_option("--rates", cap_rates,
                                               "per-message rates in b/dim, e.g. 0.5,0.5");
    auto* cap_subset_opt = capacity->add_option("--subset", cap_subset,
                                                "side information subset (\"\" = none)");
    auto* cap_k_opt = capacity->add_option("-K,--messages", cap_k,
                                           "number of messages (checked against --rates)");
    capacity->add_option("--json-in", cap_json_in, "JSON file with rates and subset");
    capacity->add_flag("--json", cap_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    try {
        if (eval->parsed()) return run_eval(eval_code, eval_json);
        if (search->parsed()) return run_search(sa);
        if (simulate_cmd->parsed()) return run_simulate(sim);
        if (codec->parsed()) {
            if (enc->parsed()) return run_codec_encode(enc_code, enc_message, enc_json);
            if (dec->parsed())
                return run_codec_decode(dec_code, dec_y, dec_subset, dec_values, dec_json);
        }
        if (capacity->parsed())
            return run_capacity(cap_rates, cap_subset, cap_json_in, cap_k,
                                cap_k_opt->count() > 0, cap_subset_opt->count() > 0,
                                cap_rates_opt->count() > 0, cap_json);
    } catch (const invalid_code_error& e) {
        std::cerr << "invalid code: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad arguments: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
