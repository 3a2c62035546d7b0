#pragma once

// Smart-dictionary plaintext space: generator word lists, a composition
// pattern ordering them, and transform rules that expand each base entry into
// a fixed number of variants. Every index in [0, N) decodes to one plaintext.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hqr::dict {

enum class GeneratorClass : std::uint8_t { Word, Number, Symbol };

char class_symbol(GeneratorClass cls) noexcept;
std::optional<GeneratorClass> class_from_symbol(char c) noexcept;

/// An ordered, duplicate-free list of printable, non-empty entries of one class.
class Generator {
public:
    /// Throws std::invalid_argument when the entry list breaks the invariants.
    Generator(GeneratorClass cls, std::vector<std::string> entries);

    GeneratorClass cls() const noexcept { return cls_; }
    const std::vector<std::string>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::string& operator[](std::size_t i) const { return entries_[i]; }

private:
    GeneratorClass cls_;
    std::vector<std::string> entries_;
};

enum class RuleKind : std::uint8_t { CaseShift, LeetSubstitute, Reverse, Identity };

std::string_view rule_kind_name(RuleKind kind) noexcept;
std::optional<RuleKind> rule_kind_from_name(std::string_view name) noexcept;

// Variant 0 of every rule is the untransformed string.
//   CaseShift: 1 = first letter upper, 2 = all upper, 3 = all lower (multiplicity <= 4)
//   LeetSubstitute: variant bits select which substitutable characters
//     (a->@, e->3, o->0, s->$, either case) are replaced, leftmost = bit 0
//   Reverse: 1 = reversed (multiplicity <= 2)
//   Identity: every variant is the base string
struct TransformRule {
    RuleKind kind = RuleKind::Identity;
    GeneratorClass applies_to = GeneratorClass::Word;
    std::uint32_t multiplicity = 1;

    friend bool operator==(const TransformRule&, const TransformRule&) = default;
};

/// Throws std::invalid_argument if multiplicity is out of range for the kind.
void validate(const TransformRule& rule);

struct CompositionPattern {
    std::vector<GeneratorClass> sequence;

    /// Parses e.g. "WNS". Throws std::invalid_argument on empty or unknown symbols.
    static CompositionPattern parse(std::string_view text);
    std::string to_string() const;
};

struct GeneratorSet {
    std::map<GeneratorClass, Generator> generators;
    std::vector<TransformRule> rules;

    const Generator* find(GeneratorClass cls) const noexcept;
};

/// A complete dictionary definition as read from a `.dict` file.
struct Dictionary {
    GeneratorSet gset;
    CompositionPattern pattern;
};

std::vector<TransformRule> rules_for(std::span<const TransformRule> rules, GeneratorClass cls);

/// Product of the multiplicities of the rules that apply to the generator's class.
/// Throws ConfigError if the product does not fit in 64 bits.
std::uint64_t compute_extension_ratio(std::span<const TransformRule> rules, const Generator& generator);

/// Applies every rule in `rules` (in order) to `base`. The variant index is
/// decomposed mixed-radix over the rule multiplicities, first rule least
/// significant. Throws std::out_of_range if variant is not below the product.
std::string apply_transform(std::string_view base, std::span<const TransformRule> rules,
                            std::uint64_t variant);

/// One pattern position's share of an index: which base entry, which variant.
struct Digit {
    std::uint64_t base = 0;
    std::uint64_t variant = 0;

    friend bool operator==(const Digit&, const Digit&) = default;
};

/// Precomputed view of a dictionary for repeated index <-> plaintext work.
class PlaintextSpace {
public:
    /// Throws ConfigError when a pattern class has no generator or N overflows 64 bits.
    PlaintextSpace(const GeneratorSet& gset, const CompositionPattern& pattern);
    explicit PlaintextSpace(const Dictionary& dictionary)
        : PlaintextSpace(dictionary.gset, dictionary.pattern) {}

    std::uint64_t size() const noexcept { return size_; }

    /// Positional mixed-radix decoding; throws std::out_of_range if i >= size().
    std::vector<Digit> decompose(std::uint64_t i) const;
    std::uint64_t compose(std::span<const Digit> digits) const;

    std::string plaintext(std::uint64_t i) const;

private:
    struct Position {
        Generator generator;
        std::vector<TransformRule> rules;
        std::uint64_t extended;  // |G_j| * extension ratio
    };

    std::vector<Position> positions_;
    std::uint64_t size_ = 1;
};

std::uint64_t plaintext_space_size(const GeneratorSet& gset, const CompositionPattern& pattern);

std::string index_to_plain(std::uint64_t i, const GeneratorSet& gset, const CompositionPattern& pattern);

/// Reads the sectioned text format ([words] [numbers] [symbols] [pattern] [rules]).
/// Throws ParseError with the offending line number.
Dictionary parse_dictionary(std::istream& in);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace hqr::dict
