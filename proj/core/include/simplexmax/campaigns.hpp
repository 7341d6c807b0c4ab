#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simplexmax/errors.hpp"

namespace simplexmax {

struct CaseRecord {
    std::string key;
    std::string status; // "pass" | "fail" | "skip" | "report"
    std::string detail; // measured values; full input tuple on failure
};

struct CampaignReport {
    std::string campaign;
    std::uint64_t seed = 0;
    std::string config_json; // resolved configuration, embedded for repro
    std::vector<CaseRecord> cases;

    bool any_failed() const;
    std::size_t count(const std::string& status) const;
    std::string to_json() const; // deterministic bytes (no timings)
    std::string to_text() const;
};

/// Dispatches on the config's "campaign" field:
///   second-moment  — sum W^2 / lambda^{2dk-2k^2-6k+4} band checks
///   l1-bound       — N_T against det(T)^{(d-k-1)/2} + |T|^{(d-k)(k-1)/2}
///   surrogate      — Cauchy-Schwarz/Hoelder surrogate property runs
///   region-crosscheck — predicate vs polytope/LP membership agreement
CampaignReport run_campaign_json(const std::string& config_text);
CampaignReport run_campaign_file(const std::string& config_path);

} // namespace simplexmax
