#pragma once

#include "qamidx/awgnsim.hpp"
#include "qamidx/gain.hpp"
#include "qamidx/search.hpp"

#include <json.hpp>

#include <string>

namespace qamidx {

// Code records: {"m", "k", "first_row"} for circulant codes, {"m", "k",
// "matrix"} otherwise. code_from_json also accepts any object carrying such a
// record under a "code" key, so every JSON the CLI emits feeds back in.
nlohmann::json to_json(const IndexCode& code);
IndexCode code_from_json(const nlohmann::json& j);

// Subsets travel as arrays of 1-based message indices.
nlohmann::json subset_to_json(Subset s, int k);
Subset subset_from_json(const nlohmann::json& j, int k);

nlohmann::json to_json(const GainReport& report);

nlohmann::json to_json(const SearchSpec& spec);
SearchSpec search_spec_from_json(const nlohmann::json& j);
nlohmann::json search_to_json(const SearchSpec& spec, const SearchResult& result, bool general);

nlohmann::json to_json(const ChannelConfig& cfg);
ChannelConfig channel_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimResult& result);

// CSV with exactly the columns S, snr_db, trials, errors, rate, stderr; the
// subset cell joins 1-based indices with ';' so the line stays comma-clean.
std::string simulate_csv(const SimResult& result);

std::string render_gain_table(const GainReport& report);
std::string render_search_summary(const SearchResult& result, bool general, int k);
std::string format_row(const IntVec& row);

} // namespace qamidx
