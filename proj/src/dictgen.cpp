#include "hqr/dictgen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "hqr/errors.hpp"

namespace hqr::dict {

namespace {

constexpr std::uint32_t kMaxLeetMultiplicity = 1u << 16;

bool checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
    return !__builtin_mul_overflow(a, b, &out);
}

bool is_printable(unsigned char c) { return c >= 0x20 && c != 0x7f; }

char leet_of(char c) {
    switch (c) {
    case 'a': case 'A': return '@';
    case 'e': case 'E': return '3';
    case 'o': case 'O': return '0';
    case 's': case 'S': return '$';
    default: return '\0';
    }
}

char ascii_upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }
char ascii_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

void apply_case_shift(std::string& s, std::uint64_t variant) {
    switch (variant) {
    case 0: break;
    case 1: {
        auto it = std::find_if(s.begin(), s.end(),
                               [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; });
        if (it != s.end()) *it = ascii_upper(*it);
        break;
    }
    case 2: std::transform(s.begin(), s.end(), s.begin(), ascii_upper); break;
    case 3: std::transform(s.begin(), s.end(), s.begin(), ascii_lower); break;
    default: throw std::logic_error("case shift variant out of range");
    }
}

void apply_leet(std::string& s, std::uint64_t variant) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (leet_of(s[i]) != '\0') slots.push_back(i);
    if (slots.empty()) return;
    // Fewer substitutable characters than variants: wrap (degenerate duplicates).
    if (slots.size() < 64) variant %= (std::uint64_t{1} << slots.size());
    for (std::size_t bit = 0; bit < slots.size() && bit < 64; ++bit)
        if ((variant >> bit) & 1u) s[slots[bit]] = leet_of(s[slots[bit]]);
}

void apply_one(std::string& s, const TransformRule& rule, std::uint64_t variant) {
    switch (rule.kind) {
    case RuleKind::CaseShift: apply_case_shift(s, variant); break;
    case RuleKind::LeetSubstitute: apply_leet(s, variant); break;
    case RuleKind::Reverse:
        if (variant == 1) std::reverse(s.begin(), s.end());
        break;
    case RuleKind::Identity: break;
    }
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

}  // namespace

char class_symbol(GeneratorClass cls) noexcept {
    switch (cls) {
    case GeneratorClass::Word: return 'W';
    case GeneratorClass::Number: return 'N';
    case GeneratorClass::Symbol: return 'S';
    }
    return '?';
}

std::optional<GeneratorClass> class_from_symbol(char c) noexcept {
    switch (c) {
    case 'W': return GeneratorClass::Word;
    case 'N': return GeneratorClass::Number;
    case 'S': return GeneratorClass::Symbol;
    default: return std::nullopt;
    }
}

Generator::Generator(GeneratorClass cls, std::vector<std::string> entries)
    : cls_(cls), entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("generator has no entries");
    std::unordered_set<std::string_view> seen;
    for (const auto& e : entries_) {
        if (e.empty()) throw std::invalid_argument("generator entry is empty");
        if (!std::all_of(e.begin(), e.end(), [](char c) { return is_printable(static_cast<unsigned char>(c)); }))
            throw std::invalid_argument("generator entry contains a control character");
        if (!seen.insert(e).second) throw std::invalid_argument("duplicate generator entry '" + e + "'");
    }
}

std::string_view rule_kind_name(RuleKind kind) noexcept {
    switch (kind) {
    case RuleKind::CaseShift: return "caseshift";
    case RuleKind::LeetSubstitute: return "leet";
    case RuleKind::Reverse: return "reverse";
    case RuleKind::Identity: return "identity";
    }
    return "?";
}

std::optional<RuleKind> rule_kind_from_name(std::string_view name) noexcept {
    for (auto k : {RuleKind::CaseShift, RuleKind::LeetSubstitute, RuleKind::Reverse, RuleKind::Identity})
        if (rule_kind_name(k) == name) return k;
    return std::nullopt;
}

void validate(const TransformRule& rule) {
    if (rule.multiplicity < 1) throw std::invalid_argument("rule multiplicity must be >= 1");
    std::uint32_t limit = 0;
    switch (rule.kind) {
    case RuleKind::CaseShift: limit = 4; break;
    case RuleKind::Reverse: limit = 2; break;
    case RuleKind::LeetSubstitute: limit = kMaxLeetMultiplicity; break;
    case RuleKind::Identity: limit = kMaxLeetMultiplicity; break;
    }
    if (rule.multiplicity > limit)
        throw std::invalid_argument(std::string(rule_kind_name(rule.kind)) + " multiplicity must be <= " +
                                    std::to_string(limit));
}

CompositionPattern CompositionPattern::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("composition pattern is empty");
    CompositionPattern p;
    for (char c : text) {
        auto cls = class_from_symbol(c);
        if (!cls) throw std::invalid_argument(std::string("unknown pattern symbol '") + c + "'");
        p.sequence.push_back(*cls);
    }
    return p;
}

std::string CompositionPattern::to_string() const {
    std::string s;
    for (auto cls : sequence) s.push_back(class_symbol(cls));
    return s;
}

const Generator* GeneratorSet::find(GeneratorClass cls) const noexcept {
    auto it = generators.find(cls);
    return it == generators.end() ? nullptr : &it->second;
}

std::vector<TransformRule> rules_for(std::span<const TransformRule> rules, GeneratorClass cls) {
    std::vector<TransformRule> out;
    std::copy_if(rules.begin(), rules.end(), std::back_inserter(out),
                 [cls](const TransformRule& r) { return r.applies_to == cls; });
    return out;
}

std::uint64_t compute_extension_ratio(std::span<const TransformRule> rules, const Generator& generator) {
    std::uint64_t n = 1;
    for (const auto& r : rules) {
        if (r.applies_to != generator.cls()) continue;
        if (!checked_mul(n, r.multiplicity, n)) throw ConfigError("transform extension ratio overflows 64 bits");
    }
    return n;
}

std::string apply_transform(std::string_view base, std::span<const TransformRule> rules, std::uint64_t variant) {
    std::uint64_t total = 1;
    bool overflow = false;
    for (const auto& r : rules) overflow |= !checked_mul(total, r.multiplicity, total);
    if (!overflow && variant >= total) throw std::out_of_range("transform variant index out of range");

    std::string out(base);
    for (const auto& r : rules) {
        apply_one(out, r, variant % r.multiplicity);
        variant /= r.multiplicity;
    }
    return out;
}

PlaintextSpace::PlaintextSpace(const GeneratorSet& gset, const CompositionPattern& pattern) {
    if (pattern.sequence.empty()) throw ConfigError("composition pattern is empty");
    for (auto cls : pattern.sequence) {
        const Generator* g = gset.find(cls);
        if (!g) throw ConfigError(std::string("pattern uses class '") + class_symbol(cls) + "' with no generator");
        Position pos{*g, rules_for(gset.rules, cls), 0};
        if (!checked_mul(g->size(), compute_extension_ratio(pos.rules, *g), pos.extended) ||
            !checked_mul(size_, pos.extended, size_))
            throw ConfigError("plaintext space size overflows 64 bits");
        positions_.push_back(std::move(pos));
    }
}

std::vector<Digit> PlaintextSpace::decompose(std::uint64_t i) const {
    if (i >= size_) throw std::out_of_range("plaintext index " + std::to_string(i) + " >= space size " +
                                            std::to_string(size_));
    std::vector<Digit> digits;
    digits.reserve(positions_.size());
    for (const auto& pos : positions_) {
        const std::uint64_t sub = i % pos.extended;
        i /= pos.extended;
        digits.push_back({sub % pos.generator.size(), sub / pos.generator.size()});
    }
    return digits;
}

std::uint64_t PlaintextSpace::compose(std::span<const Digit> digits) const {
    if (digits.size() != positions_.size()) throw std::invalid_argument("digit count does not match pattern");
    std::uint64_t i = 0;
    for (std::size_t j = positions_.size(); j-- > 0;) {
        const auto& pos = positions_[j];
        const std::uint64_t space = pos.generator.size();
        if (digits[j].base >= space || digits[j].variant >= pos.extended / space)
            throw std::out_of_range("digit out of range");
        i = i * pos.extended + digits[j].variant * space + digits[j].base;
    }
    return i;
}

std::string PlaintextSpace::plaintext(std::uint64_t i) const {
    const auto digits = decompose(i);
    std::string out;
    for (std::size_t j = 0; j < positions_.size(); ++j) {
        const auto& pos = positions_[j];
        out += apply_transform(pos.generator[digits[j].base], pos.rules, digits[j].variant);
    }
    return out;
}

std::uint64_t plaintext_space_size(const GeneratorSet& gset, const CompositionPattern& pattern) {
    return PlaintextSpace(gset, pattern).size();
}

std::string index_to_plain(std::uint64_t i, const GeneratorSet& gset, const CompositionPattern& pattern) {
    return PlaintextSpace(gset, pattern).plaintext(i);
}

Dictionary parse_dictionary(std::istream& in) {
    enum class Section { None, Words, Numbers, Symbols, Pattern, Rules };
    Section section = Section::None;
    std::map<GeneratorClass, std::vector<std::string>> lists;
    std::map<GeneratorClass, std::size_t> first_line;
    std::optional<CompositionPattern> pattern;
    std::vector<TransformRule> rules;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[' && line.back() == ']') {
            const auto name = lower(line.substr(1, line.size() - 2));
            if (name == "words") section = Section::Words;
            else if (name == "numbers") section = Section::Numbers;
            else if (name == "symbols") section = Section::Symbols;
            else if (name == "pattern") section = Section::Pattern;
            else if (name == "rules") section = Section::Rules;
            else throw ParseError("unknown section [" + name + "]", lineno);
            continue;
        }
        // A leading backslash escapes entries that would read as a comment or header.
        if (line.front() == '\\') line.remove_prefix(1);

        auto add_entry = [&](GeneratorClass cls) {
            first_line.try_emplace(cls, lineno);
            lists[cls].emplace_back(line);
        };
        switch (section) {
        case Section::None: throw ParseError("entry outside of any section", lineno);
        case Section::Words: add_entry(GeneratorClass::Word); break;
        case Section::Numbers: add_entry(GeneratorClass::Number); break;
        case Section::Symbols: add_entry(GeneratorClass::Symbol); break;
        case Section::Pattern:
            if (pattern) throw ParseError("[pattern] holds more than one line", lineno);
            try {
                pattern = CompositionPattern::parse(line);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), lineno);
            }
            break;
        case Section::Rules: {
            std::istringstream fields{std::string(line)};
            std::string kind, cls, mult, extra;
            if (!(fields >> kind >> cls >> mult) || (fields >> extra))
                throw ParseError("rule must read '<kind> <class> <multiplicity>'", lineno);
            auto k = rule_kind_from_name(lower(kind));
            if (!k) throw ParseError("unknown rule kind '" + kind + "'", lineno);
            auto c = cls.size() == 1 ? class_from_symbol(cls[0]) : std::nullopt;
            if (!c) throw ParseError("unknown rule class '" + cls + "'", lineno);
            TransformRule rule{*k, *c, 0};
            try {
                std::size_t used = 0;
                const unsigned long v = std::stoul(mult, &used);
                if (used != mult.size() || v > 0xffffffffu) throw std::invalid_argument("bad multiplicity");
                rule.multiplicity = static_cast<std::uint32_t>(v);
                validate(rule);
            } catch (const std::logic_error& e) {
                throw ParseError("invalid multiplicity '" + mult + "': " + e.what(), lineno);
            }
            rules.push_back(rule);
            break;
        }
        }
    }

    if (!pattern) throw ParseError("missing [pattern] section");
    Dictionary d;
    d.pattern = std::move(*pattern);
    d.gset.rules = std::move(rules);
    for (auto& [cls, entries] : lists) {
        try {
            d.gset.generators.emplace(cls, Generator(cls, std::move(entries)));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), first_line[cls]);
        }
    }
    for (auto cls : d.pattern.sequence)
        if (!d.gset.find(cls))
            throw ParseError(std::string("pattern uses class '") + class_symbol(cls) + "' but its section is empty");
    return d;
}

Dictionary load_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dictionary file " + path.string());
    return parse_dictionary(in);
}

}  // namespace hqr::dict
