#pragma once

// Word-packed bit rows used by the all-pairs kernels (diameter, rainbow reach).

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rainbow::detail {

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// rows x bits matrix stored contiguously.
class BitRows {
public:
    BitRows() = default;
    BitRows(std::size_t rows, std::size_t bits)
        : words_(words_for(bits)), data_(rows * words_for(bits), 0) {}

    std::size_t words() const noexcept { return words_; }
    std::uint64_t* row(std::size_t r) noexcept { return data_.data() + r * words_; }
    const std::uint64_t* row(std::size_t r) const noexcept { return data_.data() + r * words_; }

    void set(std::size_t r, std::size_t bit) noexcept { row(r)[bit >> 6] |= (1ULL << (bit & 63)); }

private:
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

inline bool test_bit(const std::uint64_t* w, std::size_t bit) noexcept {
    return (w[bit >> 6] >> (bit & 63)) & 1ULL;
}

inline void set_bit(std::uint64_t* w, std::size_t bit) noexcept { w[bit >> 6] |= (1ULL << (bit & 63)); }

inline void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) noexcept {
    for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

template <typename F>
void for_each_bit(const std::uint64_t* w, std::size_t words, F&& f) {
    for (std::size_t i = 0; i < words; ++i) {
        std::uint64_t x = w[i];
        while (x) {
            const int b = std::countr_zero(x);
            f(i * 64 + static_cast<std::size_t>(b));
            x &= x - 1;
        }
    }
}

}  // namespace rainbow::detail
