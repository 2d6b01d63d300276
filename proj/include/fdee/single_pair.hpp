#pragma once

// Closed-form minimum transmit power for one full-duplex user pair.
//
// All rates are per unit bandwidth (bit/s/Hz) and all powers are normalized
// by the receiver noise, so CNR * power is an SNR. A pair (i, j) is an uplink
// user i transmitting to the base station while the base station transmits to
// downlink user j on the same resource:
//
//   R = log2(1 + p_up h_up / (1 + chi)) + log2(1 + p_down h_down / (1 + p_up h_cci))
//
// Everything here is templated on the scalar type so the formulas can be
// evaluated in extended precision when a caller needs to.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fdee/errors.hpp"

namespace fdee {

/// Noise-normalized channel quantities of one uplink/downlink pairing.
template <typename Scalar>
struct GainTriple {
    Scalar h_up{1};    ///< uplink user -> base station CNR
    Scalar h_down{1};  ///< base station -> downlink user CNR
    Scalar h_cci{0};   ///< uplink user -> downlink user CNR (co-channel)
    Scalar chi{0};     ///< residual self-interference at the base station
};

template <typename Scalar>
struct PowerSplit {
    Scalar p_up{0};
    Scalar p_down{0};

    Scalar total() const { return p_up + p_down; }
};

/// Which face of the feasible set carries the minimum-power point.
enum class CaseLabel {
    DownlinkOnly,  ///< uplink silent, P1
    UplinkOnly,    ///< downlink silent, P2
    Interior,      ///< both directions active, P3
};

template <typename Scalar>
struct MinPower {
    Scalar value{0};
    CaseLabel label{CaseLabel::DownlinkOnly};
};

template <typename Scalar>
struct EePair {
    Scalar ee_fd{0};
    Scalar ee_hd{0};
};

using Gains = GainTriple<double>;
using Split = PowerSplit<double>;

inline const char* to_string(CaseLabel label)
{
    switch (label) {
    case CaseLabel::DownlinkOnly: return "DownlinkOnly";
    case CaseLabel::UplinkOnly: return "UplinkOnly";
    case CaseLabel::Interior: return "Interior";
    }
    return "?";
}

namespace detail {

template <typename Scalar>
std::string describe(const GainTriple<Scalar>& g)
{
    std::ostringstream os;
    os.precision(17);
    os << "(h_up=" << g.h_up << ", h_down=" << g.h_down << ", h_cci=" << g.h_cci
       << ", chi=" << g.chi << ")";
    return os.str();
}

/// 2^rate - 1 without cancellation for small rates.
template <typename Scalar>
Scalar rate_excess(Scalar rate)
{
    using std::expm1;
    return expm1(rate * std::numbers::ln2_v<Scalar>);
}

template <typename Scalar>
Scalar rate_factor(Scalar rate)
{
    using std::exp2;
    return exp2(rate);
}

/// Downlink power that meets `rate` exactly for a given uplink power.
/// Valid for 0 <= p_up <= (1+chi)(2^rate - 1)/h_up.
template <typename Scalar>
Scalar downlink_power_for(Scalar rate, Scalar p_up, const GainTriple<Scalar>& g)
{
    const Scalar c = Scalar(1) + g.chi;
    const Scalar up_snr = p_up * g.h_up;
    const Scalar numer = c * rate_excess(rate) - up_snr;
    return std::max(Scalar(0), (Scalar(1) + p_up * g.h_cci) * numer / (g.h_down * (c + up_snr)));
}

template <typename Scalar>
void require_rate(Scalar rate)
{
    using std::isfinite;
    if (!(rate >= Scalar(0)) || !isfinite(rate))
        throw DomainError("rate must be finite and non-negative");
}

} // namespace detail

template <typename Scalar>
bool valid_gains(const GainTriple<Scalar>& g)
{
    using std::isfinite;
    return g.h_up > 0 && g.h_down > 0 && g.h_cci >= 0 && g.chi >= 0 && isfinite(g.h_up) &&
           isfinite(g.h_down) && isfinite(g.h_cci) && isfinite(g.chi);
}

template <typename Scalar>
void require_valid(const GainTriple<Scalar>& g)
{
    if (!valid_gains(g))
        throw DomainError("invalid gains " + detail::describe(g));
}

/// Sum of uplink and downlink rates, bit/s/Hz.
template <typename Scalar>
Scalar fd_sum_rate(const PowerSplit<Scalar>& s, const GainTriple<Scalar>& g)
{
    using std::log1p;
    if (!(s.p_up >= Scalar(0)) || !(s.p_down >= Scalar(0)))
        throw DomainError("powers must be non-negative");
    const Scalar inv_ln2 = Scalar(1) / std::numbers::ln2_v<Scalar>;
    const Scalar up = log1p(s.p_up * g.h_up / (Scalar(1) + g.chi));
    const Scalar down = log1p(s.p_down * g.h_down / (Scalar(1) + s.p_up * g.h_cci));
    return (up + down) * inv_ln2;
}

/// Necessary condition for full duplex to beat half duplex at equal rate:
/// h_cci (1 + chi) < min(h_up, h_down).
template <typename Scalar>
bool fd_necessary_condition(const GainTriple<Scalar>& g)
{
    return g.h_cci * (Scalar(1) + g.chi) < std::min(g.h_up, g.h_down);
}

template <typename Scalar>
void require_fd_condition(const GainTriple<Scalar>& g)
{
    require_valid(g);
    if (!fd_necessary_condition(g))
        throw PreconditionViolated("full-duplex condition h_cci(1+chi) < min(h_up, h_down) fails for " +
                                   detail::describe(g));
}

/// Threshold on 2^rate below which the downlink-only face is optimal. The
/// uplink-only threshold is its reciprocal.
template <typename Scalar>
Scalar downlink_threshold(const GainTriple<Scalar>& g)
{
    const Scalar c = Scalar(1) + g.chi;
    return (g.h_down - g.h_cci) * c / (g.h_up - c * g.h_cci);
}

template <typename Scalar>
CaseLabel select_case(Scalar rate, const GainTriple<Scalar>& g)
{
    require_fd_condition(g);
    detail::require_rate(rate);
    const Scalar a = detail::rate_factor(rate);
    const Scalar t = downlink_threshold(g);
    if (a <= t)
        return CaseLabel::DownlinkOnly;
    if (a <= Scalar(1) / t)
        return CaseLabel::UplinkOnly;
    return CaseLabel::Interior;
}

template <typename Scalar>
Scalar downlink_only_power(Scalar rate, const GainTriple<Scalar>& g)
{
    return detail::rate_excess(rate) / g.h_down;
}

template <typename Scalar>
Scalar uplink_only_power(Scalar rate, const GainTriple<Scalar>& g)
{
    return detail::rate_excess(rate) * (Scalar(1) + g.chi) / g.h_up;
}

/// Both links active; the minimum of p_up + p_down on the rate conic.
template <typename Scalar>
Scalar interior_power(Scalar rate, const GainTriple<Scalar>& g)
{
    using std::sqrt;
    const Scalar c = Scalar(1) + g.chi;
    const Scalar a = detail::rate_factor(rate);
    const Scalar k = c * (g.h_up - c * g.h_cci) * (g.h_down - g.h_cci);
    const Scalar numer = Scalar(2) * sqrt(a * k) + (Scalar(1) + a) * c * g.h_cci - g.h_up - c * g.h_down;
    return numer / (g.h_up * g.h_down);
}

template <typename Scalar>
MinPower<Scalar> min_power(Scalar rate, const GainTriple<Scalar>& g)
{
    const CaseLabel label = select_case(rate, g);
    switch (label) {
    case CaseLabel::DownlinkOnly: return {downlink_only_power(rate, g), label};
    case CaseLabel::UplinkOnly: return {uplink_only_power(rate, g), label};
    case CaseLabel::Interior: break;
    }
    return {std::max(Scalar(0), interior_power(rate, g)), label};
}

/// Rate where the single-direction face meets the interior face.
template <typename Scalar>
Scalar case_boundary_rate(const GainTriple<Scalar>& g)
{
    using std::log2;
    require_fd_condition(g);
    const Scalar t = downlink_threshold(g);
    return log2(std::max(t, Scalar(1) / t));
}

/// dP_min/dR. Continuous across the case boundary.
template <typename Scalar>
Scalar marginal_power(Scalar rate, const GainTriple<Scalar>& g)
{
    using std::sqrt;
    const Scalar ln2 = std::numbers::ln2_v<Scalar>;
    const Scalar a = detail::rate_factor(rate);
    const Scalar c = Scalar(1) + g.chi;
    switch (select_case(rate, g)) {
    case CaseLabel::DownlinkOnly: return ln2 * a / g.h_down;
    case CaseLabel::UplinkOnly: return ln2 * a * c / g.h_up;
    case CaseLabel::Interior: break;
    }
    const Scalar k = c * (g.h_up - c * g.h_cci) * (g.h_down - g.h_cci);
    return ln2 * (sqrt(k * a) + c * g.h_cci * a) / (g.h_up * g.h_down);
}

/// Inverse of marginal_power: the rate whose marginal power equals `mu`, or
/// zero when `mu` does not exceed the marginal power at zero rate.
template <typename Scalar>
Scalar rate_at_marginal(Scalar mu, const GainTriple<Scalar>& g)
{
    using std::log2;
    using std::sqrt;
    require_fd_condition(g);
    const Scalar ln2 = std::numbers::ln2_v<Scalar>;
    const Scalar c = Scalar(1) + g.chi;
    const Scalar t = downlink_threshold(g);
    const bool downlink_first = t >= Scalar(1);
    const Scalar switch_factor = downlink_first ? t : Scalar(1) / t;

    // marginal of the single-direction face is ln2 * A / h_eff
    const Scalar h_eff = downlink_first ? g.h_down : g.h_up / c;
    const Scalar a_single = mu * h_eff / ln2;
    if (a_single <= Scalar(1))
        return Scalar(0);
    if (a_single <= switch_factor)
        return log2(a_single);

    // interior: c h_cci s^2 + sqrt(k) s = mu h_up h_down / ln2 with s = sqrt(A)
    const Scalar k = c * (g.h_up - c * g.h_cci) * (g.h_down - g.h_cci);
    const Scalar m = mu * g.h_up * g.h_down / ln2;
    const Scalar sk = sqrt(k);
    const Scalar s = Scalar(2) * m / (sk + sqrt(k + Scalar(4) * c * g.h_cci * m));
    return Scalar(2) * log2(s);
}

/// Power split achieving `rate` at minimum total power.
template <typename Scalar>
PowerSplit<Scalar> recover_split(Scalar rate, const GainTriple<Scalar>& g)
{
    using std::abs;
    const MinPower<Scalar> best = min_power(rate, g);
    switch (best.label) {
    case CaseLabel::DownlinkOnly: return {Scalar(0), best.value};
    case CaseLabel::UplinkOnly: return {best.value, Scalar(0)};
    case CaseLabel::Interior: break;
    }

    // Stationarity of p_up + p_down(p_up) along the rate conic, i.e. the
    // tangent slope dp_down/dp_up = -1. The derivative is increasing in p_up.
    const Scalar c = Scalar(1) + g.chi;
    const Scalar a = detail::rate_factor(rate);
    const Scalar p_up_max = c * detail::rate_excess(rate) / g.h_up;
    const auto slope = [&](Scalar p_up) {
        const Scalar d = c + p_up * g.h_up;
        return Scalar(1) - g.h_cci / g.h_down - a * c * (g.h_up - c * g.h_cci) / (g.h_down * d * d);
    };

    Scalar lo = 0;
    Scalar hi = std::min(best.value, p_up_max);
    if (slope(hi) < 0)
        hi = p_up_max;
    if (!(slope(lo) <= 0 && slope(hi) >= 0))
        throw SolverError("split recovery: stationarity not bracketed for " + detail::describe(g));
    for (int it = 0; it < 200 && hi - lo > std::numeric_limits<Scalar>::epsilon() * hi; ++it) {
        const Scalar mid = (lo + hi) / 2;
        (slope(mid) < 0 ? lo : hi) = mid;
    }
    const Scalar p_up = (lo + hi) / 2;
    const PowerSplit<Scalar> split{p_up, detail::downlink_power_for(rate, p_up, g)};

    const Scalar tol = Scalar(1e-9);
    if (abs(split.total() - best.value) > tol * std::max(Scalar(1), best.value) ||
        abs(fd_sum_rate(split, g) - rate) > tol)
        throw SolverError("split recovery: postcondition failed for " + detail::describe(g));
    return split;
}

/// Half-duplex minimum power: serve the stronger single link.
template <typename Scalar>
Scalar hd_min_power(Scalar rate, Scalar h_up, Scalar h_down)
{
    detail::require_rate(rate);
    if (!(h_up > 0) || !(h_down > 0))
        throw DomainError("CNRs must be positive");
    return detail::rate_excess(rate) / std::max(h_up, h_down);
}

/// Full-duplex minimum power for any valid gains. Uses the closed form when
/// the full-duplex condition holds; otherwise the total power along the rate
/// conic is not convex, and its minimum is taken over both endpoints and the
/// (at most one) stationary point.
template <typename Scalar>
Scalar fd_min_power(Scalar rate, const GainTriple<Scalar>& g)
{
    using std::sqrt;
    require_valid(g);
    detail::require_rate(rate);
    if (fd_necessary_condition(g))
        return min_power(rate, g).value;

    const Scalar c = Scalar(1) + g.chi;
    const Scalar p_up_max = c * detail::rate_excess(rate) / g.h_up;
    Scalar best = std::min(downlink_only_power(rate, g), uplink_only_power(rate, g));
    if (g.h_down != g.h_cci) {
        const Scalar sq = detail::rate_factor(rate) * c * (g.h_up - c * g.h_cci) / (g.h_down - g.h_cci);
        if (sq > 0) {
            const Scalar p_up = (sqrt(sq) - c) / g.h_up;
            if (p_up > 0 && p_up < p_up_max)
                best = std::min(best, p_up + detail::downlink_power_for(rate, p_up, g));
        }
    }
    return best;
}

/// Energy efficiency of full and half duplex at the same rate, in bits per
/// unit bandwidth per joule.
template <typename Scalar>
EePair<Scalar> compare_ee(Scalar rate, const GainTriple<Scalar>& g, Scalar omega, Scalar p_fix)
{
    const Scalar p_fd = fd_min_power(rate, g);
    const Scalar p_hd = hd_min_power(rate, g.h_up, g.h_down);
    const auto ee = [&](Scalar p) {
        const Scalar denom = omega * p + p_fix;
        return denom > 0 ? rate / denom : Scalar(0);
    };
    return {ee(p_fd), ee(p_hd)};
}

} // namespace fdee
