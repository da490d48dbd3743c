#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace carbonsched {

// Active 5-minute interval indices into a series, strictly increasing.
// Profile segment j runs in interval indices()[j].
class Schedule {
public:
    explicit Schedule(std::vector<std::size_t> indices);

    static Schedule contiguous(std::size_t start, std::size_t n_intervals);

    std::span<const std::size_t> indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    std::size_t front() const { return indices_.front(); }
    std::size_t back() const { return indices_.back(); }

    bool is_contiguous() const;
    // Maximal runs of inactive intervals strictly between active ones.
    std::size_t n_pauses() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    std::vector<std::size_t> indices_;
};

} // namespace carbonsched
