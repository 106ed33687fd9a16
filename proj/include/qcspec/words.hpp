#pragma once

// Combinatorics on finite windows of symbolic sequences.
//
// Every statistic here is computed from a finite window only.  Factor sets at
// length n are trusted when the window is at least 4n long; each report also
// carries a saturation flag (no new factor appears in the last quarter of the
// window), which is a heuristic completeness signal and nothing more.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcspec/common.hpp"

namespace qcs {

/// Ordered set of distinct symbol labels.  Symbols are the indices 0..size()-1.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> labels);

    /// Labels "0", "1", ..., "m-1".
    static Alphabet numeric(int m);
    /// Labels "first", "first+1", ... (e.g. numeric_from(4, 1) gives 1,2,3,4).
    static Alphabet numeric_from(int m, int first);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(Symbol s) const { return labels_.at(s); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Index of a label; throws InvalidArgument when absent.
    Symbol index_of(std::string_view label) const;
    bool single_char_labels() const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<std::string> labels_;
};

using Word = std::vector<Symbol>;

/// Parses a word written with single-character labels.
Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

/// Contiguous restriction of a symbolic sequence: symbols[i] is the symbol at
/// absolute index start + i.
struct Window {
    Index start = 0;
    Word symbols;
    Alphabet alphabet;

    Index size() const { return static_cast<Index>(symbols.size()); }
    Index end() const { return start + size(); }
    bool covers(Index first, Index last_exclusive) const {
        return first >= start && last_exclusive <= end();
    }
    Symbol at(Index n) const;
    Window slice(Index first, Index last_exclusive) const;
    std::string to_string() const { return format_word(symbols, alphabet); }

    /// Canonicalizes the distinct characters of `text` (sorted) into an alphabet.
    static Window from_string(std::string_view text, Index start = 0);
    /// Same, but with a fixed alphabet.
    static Window from_string(std::string_view text, const Alphabet& alphabet, Index start = 0);
    /// Canonicalizes distinct integers (sorted) into 0..m-1 with decimal labels.
    static Window from_integers(const std::vector<long long>& values, Index start = 0);
};

// ---------------------------------------------------------------------------
// Factor statistics

struct FactorCount {
    Word word;
    Index first_position = 0;  // absolute index of the first occurrence
    Index count = 0;
};

/// Distinct length-n factors of the window (lexicographic order) with
/// occurrence counts.  Requires window length >= 4n.
std::vector<FactorCount> factors(const Window& w, int n);

/// Empirical cylinder frequencies count / (|window| - n + 1).
std::vector<std::pair<Word, double>> empirical_frequencies(const Window& w, int n);

struct ComplexityProfile {
    int n_max = 0;
    std::vector<Index> values;     // values[n-1] = p(n)
    std::vector<bool> saturated;   // saturated[n-1]: no new length-n factor in the last quarter
    bool aperiodic = false;        // p(n) >= n + 1 for every computed n
    /// First n0 with p(n0) <= n0 whose Rauzy graph is a simple cycle: the
    /// window is consistent with a periodic sequence of period p(n0).
    std::optional<Index> period;

    Index p(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

ComplexityProfile complexity_profile(const Window& w, int n_max);

struct RauzyGraph {
    struct Edge {
        int from = 0;  // vertex indices
        int to = 0;
        Word label;    // length n+1
    };
    int n = 0;
    std::vector<Word> vertices;  // length-n factors, lexicographic
    std::vector<Edge> edges;
    bool strongly_connected = false;
    bool saturated = false;

    std::vector<int> out_degrees() const;
    std::vector<int> in_degrees() const;
    /// Every vertex has in- and out-degree one and the graph is one cycle.
    bool is_simple_cycle() const;
};

RauzyGraph rauzy_graph(const Window& w, int n);

struct SpecialFactor {
    Word word;
    int right_extensions = 0;
    int left_extensions = 0;
    bool right_special() const { return right_extensions >= 2; }
    bool left_special() const { return left_extensions >= 2; }
    bool bispecial() const { return right_special() && left_special(); }
};

struct SpecialFactorReport {
    int n = 0;
    std::vector<SpecialFactor> special;  // only factors that are left- or right-special
    int right_special_count = 0;
    int left_special_count = 0;
    int bispecial_count = 0;
};

SpecialFactorReport special_factors(const Window& w, int n);

// ---------------------------------------------------------------------------
// Palindromes

struct Palindrome {
    Index start = 0;   // absolute index of the first symbol
    Index length = 0;
    bool touches_boundary = false;  // may extend beyond the window
    /// Absolute center (half-integer for even lengths).
    double center() const { return static_cast<double>(start) + 0.5 * static_cast<double>(length - 1); }
};

/// Maximal palindromic factors (one per center) of length >= min_len.
std::vector<Palindrome> palindrome_scan(const Window& w, Index min_len);

struct PalindromeWitness {
    double center = 0;       // n_j, distance of the center from the origin
    Index length = 0;        // l_j
    double log_ratio = 0;    // log(B^{n_j} / l_j)
};

/// Record-low ratios B^{n_j}/l_j among maximal palindromes of length >= min_len,
/// ordered by increasing |center|.  A strongly palindromic sequence shows
/// log_ratio tending to -infinity along the witnesses.
std::vector<PalindromeWitness> palindrome_witnesses(const Window& w, Index min_len, double growth_constant);

// ---------------------------------------------------------------------------
// Powers and recurrence

struct IndexReport {
    bool occurs = false;
    Rational index;         // 0/1 when the word does not occur
    Index position = 0;     // absolute start of the best power
};

/// Largest r = |u|/|w| over factors u of the window that start with w and have
/// period |w|.  A certified lower bound for ind(w).
IndexReport index_of(const Word& word, const Window& w);

struct SubshiftIndexReport {
    Rational index;
    Word witness;
    Index position = 0;
};

/// sup of index_of over all factors of length <= max_period.
SubshiftIndexReport subshift_index(const Window& w, int max_period);

class TooFewOccurrences : public Error {
public:
    explicit TooFewOccurrences(Index n)
        : Error("word occurs " + std::to_string(n) + " time(s); at least 2 required"), count(n) {}
    Index count;
};

struct RecurrenceReport {
    Word word;
    std::vector<Index> positions;  // absolute, strictly increasing
    std::vector<Index> gaps;
    Index max_gap = 0;
    double max_gap_ratio = 0;  // max_gap / |word|
    double frequency = 0;      // occurrences / (|window| - |word| + 1)
};

RecurrenceReport recurrence_report(const Window& w, const Word& word);

/// min over length-n factors of n * (empirical frequency).
double boshernitzan_quantity(const Window& w, int n);

}  // namespace qcs
