#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sdlc/rng.hpp"

namespace sdlc {

struct OracleEntry {
    std::string name;
    bool pass = false;
    double empirical = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct DecayLawStats {
    std::size_t triples = 0;
    std::size_t decay_violations = 0;     // tan^2' > (1 - r^2) tan^2 + 1e-9
    std::size_t monotone_violations = 0;  // tan' > tan
    double worst_excess = 0.0;            // max of tan^2' - (1 - r^2) tan^2
};

/// Random (w, w*, x) with theta(w, w*) < pi/2 and x in the disagreement region.
DecayLawStats decay_law_trials(std::size_t triples, RngStream& rng);

std::vector<OracleEntry> decay_law_entries(std::size_t triples, RngStream& rng);
std::vector<OracleEntry> disagreement_mass_entries(std::size_t d, std::size_t n, std::size_t trials, RngStream& rng);
std::vector<OracleEntry> anti_concentration_entries(double scale, RngStream& rng);
std::vector<OracleEntry> superlinear_entries(std::size_t trials, RngStream& rng);
std::vector<OracleEntry> update_count_entries(std::size_t trials, RngStream& rng);

} // namespace sdlc
