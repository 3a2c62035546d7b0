#pragma once

#include <sstream>
#include <string>

#include "hqr/dictgen.hpp"
#include "hqr/table.hpp"

namespace hqr::testing {

inline dict::Dictionary dictionary_from(const std::string& text) {
    std::istringstream in(text);
    return dict::parse_dictionary(in);
}

// W = [pass, admin], N = [1, 2], pattern WN: N = 4.
inline dict::Dictionary tiny_dictionary() {
    return dictionary_from("[words]\npass\nadmin\n[numbers]\n1\n2\n[pattern]\nWN\n");
}

// 16 words x 2 case variants x 16 numbers x 8 symbols = 2^12 plaintexts.
inline dict::Dictionary dictionary_4096() {
    std::string text = "[words]\n";
    for (const char* w : {"pass", "admin", "love", "dragon", "monkey", "shadow", "master", "sunshine", "princess",
                          "football", "welcome", "flower", "secret", "summer", "tiger", "hello"})
        text += std::string(w) + "\n";
    text += "[numbers]\n";
    for (int i = 0; i < 16; ++i) text += std::to_string(1990 + i) + "\n";
    text += "[symbols]\n!\n@\n\\#\n$\n%\n&\n*\n?\n[pattern]\nWNS\n[rules]\ncaseshift W 2\n";
    return dictionary_from(text);
}

inline rainbow::TableParams params_for(dict::Dictionary d, std::uint64_t t, std::uint64_t m, unsigned kappa = 16,
                                       std::uint64_t seed = 7) {
    rainbow::TableParams p;
    p.chain_length = t;
    p.chain_count = m;
    p.k = 16;
    p.kappa = kappa;
    p.seed = seed;
    p.dictionary = std::move(d);
    return p;
}

}  // namespace hqr::testing
