#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noisyodds/fairsolver.hpp"
#include "noisyodds/table.hpp"

namespace noisyodds {

namespace status {
inline constexpr const char* kOk = "ok";
inline constexpr const char* kFail = "fail";
/// A printed expression disagrees with its oracle and the library ships a
/// corrected form in its place.
inline constexpr const char* kPrintedDefectCorrected = "printed-defect-corrected";
/// A known disagreement between a printed formula and the accompanying claim;
/// both quantities are exposed, neither is silently chosen.
inline constexpr const char* kDocumentedDiscrepancy = "documented-discrepancy";
}  // namespace status

struct Finding {
    std::string check;
    std::string variant;
    double p_c = 0.0;
    double epsilon = 0.0;
    std::string segment_id;
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    std::string status;
};

struct TamperRequest {
    Variant variant = Variant::BasicGame;
    Segment segment = Segment::I;
    double offset = 1e-3;
};

struct VerifyOptions {
    double abs_tol = 1e-6;
    double se_mult = 3.0;
    /// Empty grids select 0.05, 0.10, ..., 0.95 for p_c and 0.05, ..., 1 for
    /// epsilon; the lines 2 p_c + epsilon = 1 and epsilon + 1 = 2 p_c are added.
    std::vector<double> p_c_grid;
    std::vector<double> epsilon_grid;
    /// Draws per conditioned-margin point; 0 skips those checks.
    std::uint64_t pair_draws = 10'000'000;
    /// Trials per simulated game; 0 skips the game-level checks.
    std::uint64_t game_trials = 20'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<TamperRequest> tamper;
};

struct VerifyReport {
    std::vector<Finding> findings;

    bool passed() const noexcept;
    std::size_t count(const std::string& status) const noexcept;
    Table to_table() const;
};

/// Sweeps every closed form against its oracle and runs the Monte Carlo
/// agreement suite. Never throws on a disagreement; it becomes a finding.
VerifyReport run_verification(const VerifyOptions& options);

}  // namespace noisyodds
