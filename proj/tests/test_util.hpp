#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cph/encodings.hpp"

// Test-only reference encoders.  These follow the definitions literally and
// stay independent of the stack/window shortcuts in the library.

inline cph::Sequence seq(const std::string& digits) {
    cph::Sequence s;
    for (const char c : digits) s.push_back(static_cast<cph::Character>(c - '0'));
    return s;
}

inline cph::PdSequence pd_naive(const cph::Sequence& s) {
    cph::PdSequence pd;
    pd.values.resize(s.size());
    for (std::size_t i = 1; i <= s.size(); ++i) {
        std::uint32_t v = 0;
        for (std::size_t j = i - 1; j >= 1; --j) {
            if (s[j - 1] <= s[i - 1]) {
                v = static_cast<std::uint32_t>(i - j);
                break;
            }
        }
        pd.values[i - 1] = v;
    }
    return pd;
}

inline std::vector<std::uint32_t> fronts_naive(const cph::PdSequence& pd) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= pd.size(); ++i)
        if (pd.at(i) == i - 1) out.push_back(i);
    return out;
}

inline cph::FpSequence fp_naive(const cph::Sequence& s) {
    cph::FpSequence fp;
    fp.values.resize(s.size());
    for (std::size_t i = 1; i <= s.size(); ++i) {
        const cph::Sequence suffix(s.begin() + (i - 1), s.end());
        fp.values[i - 1] =
            static_cast<std::uint32_t>(fronts_naive(pd_naive(suffix)).size());
    }
    return fp;
}

inline cph::Sequence random_seq(std::mt19937_64& rng, std::uint32_t n, std::uint32_t sigma) {
    std::uniform_int_distribution<std::uint32_t> dist(1, sigma);
    cph::Sequence s(n);
    for (auto& c : s) c = dist(rng);
    return s;
}
