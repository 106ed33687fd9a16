#pragma once

// Window generators for the sequence families: Sturmian codings, standard
// words, primitive substitutions, codings of rotations and interval exchanges.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qcspec/continued_fraction.hpp"
#include "qcspec/words.hpp"

namespace qcs {

/// Rotation angle held as an exact rational.  When the angle stands for an
/// irrational number through a convergent, error_bound_den bounds the
/// approximation error by 1/error_bound_den; it is zero for exact angles.
struct ExactAngle {
    BigInt num;
    BigInt den = 1;
    BigInt error_bound_den = 0;

    double value() const;
    static ExactAngle from_convergent(const ContinuedFraction& cf);
    static ExactAngle from_double(double x);
};

/// Point of the circle written as c + k*theta, with c a double taken exactly.
struct CutPoint {
    double constant = 0.0;
    int theta_multiple = 0;
};

enum class EndpointConvention { LeftClosed, RightClosed };

/// theta in (0,1) (irrational by contract), phase phi in [0,1) and the
/// endpoint convention of the coding interval.
class SturmianParams {
public:
    /// Angle from the deepest convergent of `cf`; cf must be deep enough that
    /// every evaluated index is certified (see sturmian_window).
    SturmianParams(ContinuedFraction cf, double phi, EndpointConvention variant = EndpointConvention::LeftClosed);
    /// Angle equal to the double `theta`.  Rejects theta that agrees with a
    /// rational p/q, q <= 10^6, to within 1e-14.
    static SturmianParams from_theta(double theta, double phi,
                                     EndpointConvention variant = EndpointConvention::LeftClosed);

    const ExactAngle& angle() const { return angle_; }
    const std::optional<ContinuedFraction>& cf() const { return cf_; }
    double theta() const { return angle_.value(); }
    double phi() const { return phi_; }
    EndpointConvention variant() const { return variant_; }

private:
    SturmianParams(ExactAngle angle, std::optional<ContinuedFraction> cf, double phi, EndpointConvention v);
    ExactAngle angle_;
    std::optional<ContinuedFraction> cf_;
    double phi_;
    EndpointConvention variant_;
};

/// s_n = chi_[1-theta,1)(n theta + phi)  (LeftClosed), or with (1-theta,1]
/// (RightClosed), for first <= n < last.  Exact rational evaluation; throws
/// when the convergent approximation cannot certify a symbol.
Window sturmian_window(const SturmianParams& params, Index first, Index last);

/// w_0 = 0, w_1 = 0^{a_1-1} 1, w_{k+1} = w_k^{a_{k+1}} w_{k-1}.
struct StandardWords {
    std::vector<Word> words;  // w_0..w_k
    Alphabet alphabet = Alphabet::numeric(2);
    const Word& operator[](int k) const { return words.at(static_cast<std::size_t>(k)); }
};

StandardWords standard_words(const ContinuedFraction& cf, int k);

// ---------------------------------------------------------------------------

struct KPartition {
    enum class BlockType { Current, Previous };  // w_k, w_{k-1}
    struct Block {
        BlockType type;
        Index start = 0;   // absolute index of the first symbol inside the window
        Index length = 0;  // symbols inside the window
        bool partial = false;
    };
    int level = 0;
    std::vector<Block> blocks;
    /// Lengths of the runs of w_k blocks delimited by w_{k-1} blocks on both sides.
    std::vector<int> interior_multiplicities;
};

class PartitionFailure : public Error {
public:
    explicit PartitionFailure(Index i)
        : Error("k-partition fails at index " + std::to_string(i)), index(i) {}
    Index index;
};

/// Unique parse of a Sturmian window into w_k / w_{k-1} blocks in which w_k
/// runs have length a_{k+1} or a_{k+1}+1 and w_{k-1} blocks are isolated.
/// Edge blocks may be partial.  k = 0 splits into single symbols.
KPartition k_partition(const Window& window, const ContinuedFraction& cf, int k);

// ---------------------------------------------------------------------------

class Substitution {
public:
    Substitution(Alphabet alphabet, std::vector<Word> images);
    /// Rules written as label -> image over single-character labels.
    static Substitution from_rules(const Alphabet& alphabet, const std::vector<std::string>& images);

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& image(Symbol s) const { return images_.at(s); }
    /// M(a, b) = number of occurrences of b in S(a).
    Eigen::MatrixXi matrix() const;
    Word apply(const Word& w) const;
    Substitution power(int m) const;

private:
    Alphabet alphabet_;
    std::vector<Word> images_;
};

struct PrimitivityReport {
    bool primitive = false;
    int power = 0;  // smallest k with M^k > 0
};

PrimitivityReport primitivity_check(const Substitution& s);

/// Prefix of the fixed point lim S^n(seed).  When S(seed) does not begin with
/// seed (or has length 1) a power S^m, m <= 2|A|, is used instead.
Window substitution_fixed_point(const Substitution& s, Symbol seed, Index length);

// ---------------------------------------------------------------------------

class RotationCoding {
public:
    /// Intervals [c_{j-1}, c_j) with c_0 = 0 < c_1 < ... < c_l = 1; `cuts` holds
    /// the l-1 interior points, `labels` the l interval labels.
    RotationCoding(ExactAngle theta, double phi, std::vector<CutPoint> cuts, Alphabet labels);
    Window window(Index first, Index last) const;

    const ExactAngle& theta() const { return theta_; }
    int intervals() const { return labels_.size(); }

private:
    ExactAngle theta_;
    double phi_;
    std::vector<CutPoint> cuts_;
    Alphabet labels_;
};

// ---------------------------------------------------------------------------

/// (lambda, tau) interval exchange.  tau is 0-based: interval i is moved to
/// position tau[i].
class IntervalExchange {
public:
    IntervalExchange(std::vector<double> lengths, std::vector<int> tau);

    int size() const { return static_cast<int>(lengths_.size()); }
    const std::vector<double>& lengths() const { return lengths_; }
    const std::vector<int>& tau() const { return tau_; }
    /// Left endpoints mu_0..mu_{m-1}.
    const std::vector<double>& left_endpoints() const { return mu_; }
    int interval_of(double x) const;
    double operator()(double x) const;
    /// The (lambda^tau, tau^{-1}) exchange.
    IntervalExchange inverse() const;

private:
    std::vector<double> lengths_;
    std::vector<int> tau_;
    std::vector<double> mu_, mu_tau_;
};

/// omega_n = i if T^n(x0) lies in I_i, for first <= n < last (labels 1..m).
Window iet_coding(const IntervalExchange& t, double x0, Index first, Index last);

struct KeaneReport {
    bool collision_free = true;
    int horizon = 0;
    // First collision T^steps(mu_from) == mu_to, when found.
    int from = 0, to = 0, steps = 0;
};

/// Falsifier for Keane's condition: searches the forward orbits of the interior
/// discontinuities for hits on a discontinuity within the horizon.
KeaneReport keane_check(const IntervalExchange& t, int horizon = 100000, double tol = 1e-12);

// ---------------------------------------------------------------------------

struct EntropyEstimate {
    std::vector<double> rates;  // rates[n-1] = log p(n) / n
    double value = 0;           // rates.back()
    bool subadditive = true;    // log p(m+n) <= log p(m) + log p(n) on the computed range
};

EntropyEstimate entropy_estimate(const Window& w, int n_max);

}  // namespace qcs
