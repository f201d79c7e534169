#pragma once

#include <cctype>
#include <string_view>
#include <vector>

namespace oval {

// Knuth-Morris-Pratt prefix table: fail[i] = length of the longest proper
// prefix of pattern[0..i] that is also a suffix of it.
inline std::vector<int> kmp_failure(std::string_view pattern) {
    std::vector<int> fail(pattern.size(), 0);
    int k = 0;
    for (std::size_t i = 1; i < pattern.size(); ++i) {
        while (k > 0 && pattern[i] != pattern[k]) k = fail[k - 1];
        if (pattern[i] == pattern[k]) ++k;
        fail[i] = k;
    }
    return fail;
}

// Calls visit(start_index) for every occurrence; visit returns false to
// stop early. Empty patterns match at position 0.
template <typename Visit>
void kmp_search(std::string_view text, std::string_view pattern, Visit visit) {
    if (pattern.empty()) {
        visit(std::size_t{0});
        return;
    }
    auto fail = kmp_failure(pattern);
    int k = 0;
    int m = static_cast<int>(pattern.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        while (k > 0 && text[i] != pattern[static_cast<std::size_t>(k)]) k = fail[k - 1];
        if (text[i] == pattern[static_cast<std::size_t>(k)]) ++k;
        if (k == m) {
            if (!visit(i + 1 - pattern.size())) return;
            k = fail[k - 1];
        }
    }
}

inline bool kmp_contains(std::string_view text, std::string_view pattern) {
    bool found = false;
    kmp_search(text, pattern, [&](std::size_t) {
        found = true;
        return false;
    });
    return found;
}

inline bool is_token_boundary_char(char c) {
    return !std::isalnum(static_cast<unsigned char>(c));
}

// True when pattern occurs in text starting and ending at token
// boundaries ("desk" in "green desk" but not "cup" in "cupboard").
inline bool kmp_contains_word(std::string_view text, std::string_view pattern) {
    if (pattern.empty()) return false;
    bool found = false;
    kmp_search(text, pattern, [&](std::size_t pos) {
        bool left_ok = pos == 0 || is_token_boundary_char(text[pos - 1]);
        std::size_t end = pos + pattern.size();
        bool right_ok = end == text.size() || is_token_boundary_char(text[end]);
        if (left_ok && right_ok) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

} // namespace oval
