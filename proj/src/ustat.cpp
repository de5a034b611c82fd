#include "tsmw/ustat.hpp"

#include <algorithm>
#include <sstream>

#include "tsmw/errors.hpp"

namespace tsmw {

SampleDesign SampleDesign::make(Count controls1, Count treated1, Count controls, Count treated) {
    if (controls1 < 1 || treated1 < 1) {
        throw DomainError("stage-1 sample sizes must be at least 1");
    }
    if (controls < controls1 || treated < treated1) {
        throw DomainError("pooled sample sizes must not be smaller than the stage-1 sizes");
    }
    return {controls1, treated1, controls, treated};
}

std::string to_string(const SampleDesign& d) {
    std::ostringstream os;
    os << "(m=" << d.controls1 << ", n=" << d.treated1 << ", M=" << d.controls << ", N=" << d.treated << ")";
    return os.str();
}

std::string to_string(CriticalValueMethod method) {
    switch (method) {
        case CriticalValueMethod::ExactEnumeration: return "ExactEnumeration";
        case CriticalValueMethod::CornishFisher: return "CornishFisher";
        case CriticalValueMethod::MonteCarlo: return "MonteCarlo";
    }
    return "?";
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::RejectAtStage1: return "RejectAtStage1";
        case Outcome::RejectAtStage2: return "RejectAtStage2";
        case Outcome::FailToReject: return "FailToReject";
    }
    return "?";
}

Count mann_whitney_u(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> sorted_y(ys.begin(), ys.end());
    std::sort(sorted_y.begin(), sorted_y.end());
    Count u = 0;
    for (double x : xs) {
        auto [lo, hi] = std::equal_range(sorted_y.begin(), sorted_y.end(), x);
        if (lo != hi) {
            std::ostringstream os;
            os << "tie between a control and a treated observation at value " << x;
            throw TieError(os.str());
        }
        u += static_cast<Count>(sorted_y.end() - hi);
    }
    return u;
}

SampleDesign TwoStageData::design() const {
    return SampleDesign::make(static_cast<Count>(x_stage1.size()), static_cast<Count>(y_stage1.size()),
                              static_cast<Count>(x_stage1.size() + x_stage2.size()),
                              static_cast<Count>(y_stage1.size() + y_stage2.size()));
}

std::vector<double> TwoStageData::pooled_x() const {
    std::vector<double> out(x_stage1);
    out.insert(out.end(), x_stage2.begin(), x_stage2.end());
    return out;
}

std::vector<double> TwoStageData::pooled_y() const {
    std::vector<double> out(y_stage1);
    out.insert(out.end(), y_stage2.begin(), y_stage2.end());
    return out;
}

StageStatistics two_stage_statistics(const TwoStageData& data) {
    (void)data.design();
    const Count u1 = mann_whitney_u(data.x_stage1, data.y_stage1);
    const Count u2 = mann_whitney_u(data.pooled_x(), data.pooled_y());
    return {u1, u2};
}

}  // namespace tsmw
