#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quint/errors.hpp"

namespace quint {

/// A d-bit binary vector packed into 64-bit words. Bit j lives in word j/64 at
/// position j%64; bits at positions >= d in the last word are always zero.
class Sketch {
public:
    Sketch() = default;

    explicit Sketch(std::uint64_t d)
        : d_(d), words_((d + 63) / 64, 0) {}

    std::uint64_t dim() const noexcept { return d_; }
    std::size_t word_count() const noexcept { return words_.size(); }

    bool test(std::uint64_t j) const {
        check_index(j);
        return (words_[j >> 6] >> (j & 63)) & 1u;
    }

    void set(std::uint64_t j) {
        check_index(j);
        words_[j >> 6] |= std::uint64_t{1} << (j & 63);
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    friend bool operator==(const Sketch&, const Sketch&) = default;

private:
    void check_index(std::uint64_t j) const {
        if (j >= d_) {
            throw ParameterError("sketch bit index " + std::to_string(j) +
                                 " out of range for dimension " + std::to_string(d_));
        }
    }

    std::uint64_t d_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace quint
