#pragma once

#include <string>

namespace lbp {

/// Three-valued answer for criteria decided by numerical divergence analysis.
enum class Trilean { Yes, No, Undecidable };

inline const char* to_string(Trilean t) {
    switch (t) {
        case Trilean::Yes: return "yes";
        case Trilean::No: return "no";
        default: return "undecidable";
    }
}

/// A Trilean plus the numeric evidence it was decided on.
struct Decision {
    Trilean value = Trilean::Undecidable;
    double evidence = 0.0;   // fitted exponent or comparable statistic
    std::string note;        // short human-readable account of the rule used

    explicit operator bool() const { return value == Trilean::Yes; }
};

} // namespace lbp
