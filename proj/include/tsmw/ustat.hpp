#pragma once

#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsmw/design.hpp"

namespace tsmw {

// Number of pairs (i, j) with xs[i] < ys[j]. Throws TieError if any xs[i] == ys[j].
Count mann_whitney_u(std::span<const double> xs, std::span<const double> ys);

struct TwoStageData {
    std::vector<double> x_stage1;
    std::vector<double> y_stage1;
    std::vector<double> x_stage2;
    std::vector<double> y_stage2;

    SampleDesign design() const;
    std::vector<double> pooled_x() const;
    std::vector<double> pooled_y() const;
};

struct StageStatistics {
    Count u1 = 0;
    Count u2 = 0;
};

// u1 over the stage-1 samples, u2 over the pooled samples.
StageStatistics two_stage_statistics(const TwoStageData& data);

enum class Outcome { RejectAtStage1, RejectAtStage2, FailToReject };

std::string to_string(Outcome outcome);

struct Decision {
    Outcome outcome = Outcome::FailToReject;
    Count u1 = 0;
    std::optional<Count> u2;  // absent when the trial stopped at stage 1
};

// Applies the two-stage rule. The supplier is only invoked when the trial continues
// past stage 1, so stage-2 data never has to exist for an early stop.
template <class Supplier>
    requires std::invocable<Supplier&> && std::convertible_to<std::invoke_result_t<Supplier&>, Count>
Decision two_stage_decision(Count u1, Supplier&& u2_supplier, const CriticalValuePair& c) {
    if (u1 >= c.c1) {
        return {Outcome::RejectAtStage1, u1, std::nullopt};
    }
    const Count u2 = u2_supplier();
    return {u2 >= c.c2 ? Outcome::RejectAtStage2 : Outcome::FailToReject, u1, u2};
}

}  // namespace tsmw
