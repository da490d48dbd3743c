#include "carbonsched/schedule.hpp"

#include "carbonsched/error.hpp"

#include <numeric>

namespace carbonsched {

Schedule::Schedule(std::vector<std::size_t> indices) : indices_(std::move(indices))
{
    if (indices_.empty()) {
        fail_validation("schedule must contain at least one interval");
    }
    for (std::size_t j = 1; j < indices_.size(); ++j) {
        if (indices_[j] <= indices_[j - 1]) {
            fail_validation("schedule indices must be strictly increasing");
        }
    }
}

Schedule Schedule::contiguous(std::size_t start, std::size_t n_intervals)
{
    std::vector<std::size_t> indices(n_intervals);
    std::iota(indices.begin(), indices.end(), start);
    return Schedule(std::move(indices));
}

bool Schedule::is_contiguous() const { return back() - front() + 1 == indices_.size(); }

std::size_t Schedule::n_pauses() const
{
    std::size_t pauses = 0;
    for (std::size_t j = 1; j < indices_.size(); ++j) {
        if (indices_[j] != indices_[j - 1] + 1) {
            ++pauses;
        }
    }
    return pauses;
}

} // namespace carbonsched
