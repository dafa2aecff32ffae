#include "qtp/measure.hpp"

#include <algorithm>
#include <cmath>

namespace qtp {

namespace {

// Outcomes below this squared-amplitude weight are treated as impossible.
// Valid protocol outcomes sit at 1/d^2n >= ~1e-4 at desk scale.
constexpr double kZeroWeight = 1e-24;

void check_pairs(const StateVector& joint, const std::vector<QuditPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("measure: no pairs given");
    std::vector<bool> seen(static_cast<std::size_t>(joint.m), false);
    for (const QuditPair& p : pairs) {
        for (int pos : {p.a, p.x}) {
            if (pos < 0 || pos >= joint.m)
                throw std::invalid_argument("measure: pair position out of range");
            if (seen[static_cast<std::size_t>(pos)])
                throw std::invalid_argument("measure: overlapping pairs");
            seen[static_cast<std::size_t>(pos)] = true;
        }
    }
    if (2 * pairs.size() == static_cast<std::size_t>(joint.m))
        throw std::invalid_argument("measure: at least one qudit must stay unmeasured");
}

void check_outcome(const Outcome& outcome, int d, std::size_t n) {
    if (outcome.labels.size() != n)
        throw std::invalid_argument("measure: outcome label count mismatch");
    for (const BellLabel& l : outcome.labels)
        if (l.k < 0 || l.k >= d || l.l < 0 || l.l >= d)
            throw std::invalid_argument("measure: outcome label out of range");
}

// d^2 x d^2 basis change whose columns are the Bell states in rank order;
// its adjoint maps |Phi_kl> to the basis vector with index k*d + l.
Matrix bell_basis_adjoint(int d) {
    const int dd = d * d;
    Matrix w(dd, dd);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const StateVector phi = gbs_state(d, BellLabel{k, l});
            for (int r = 0; r < dd; ++r) w(r, k * d + l) = phi.amps[static_cast<std::size_t>(r)];
        }
    return adjoint(w);
}

int digit_at(std::size_t x, std::size_t stride, int d) {
    return static_cast<int>((x / stride) % static_cast<std::size_t>(d));
}

}  // namespace

std::size_t outcome_rank(const Outcome& outcome, int d) {
    std::size_t r = 0;
    for (const BellLabel& l : outcome.labels) {
        r = r * static_cast<std::size_t>(d) + static_cast<std::size_t>(l.k);
        r = r * static_cast<std::size_t>(d) + static_cast<std::size_t>(l.l);
    }
    return r;
}

Outcome outcome_from_rank(std::size_t rank, int d, int n) {
    Outcome out{std::vector<BellLabel>(static_cast<std::size_t>(n))};
    for (int i = n - 1; i >= 0; --i) {
        const int l = static_cast<int>(rank % static_cast<std::size_t>(d));
        rank /= static_cast<std::size_t>(d);
        const int k = static_cast<int>(rank % static_cast<std::size_t>(d));
        rank /= static_cast<std::size_t>(d);
        out.labels[static_cast<std::size_t>(i)] = BellLabel{k, l};
    }
    if (rank != 0) throw std::invalid_argument("outcome_from_rank: rank out of range");
    return out;
}

ProjectionResult project_outcome(const StateVector& joint,
                                 const std::vector<QuditPair>& pairs,
                                 const Outcome& outcome) {
    check_pairs(joint, pairs);
    check_outcome(outcome, joint.d, pairs.size());
    const int d = joint.d;

    std::vector<std::vector<Cx>> bras;
    bras.reserve(pairs.size());
    for (const BellLabel& l : outcome.labels)
        bras.push_back(gbs_state(d, l).amps);

    std::vector<bool> measured(static_cast<std::size_t>(joint.m), false);
    for (const QuditPair& p : pairs) {
        measured[static_cast<std::size_t>(p.a)] = true;
        measured[static_cast<std::size_t>(p.x)] = true;
    }
    std::vector<std::size_t> rest_strides;
    for (int pos = 0; pos < joint.m; ++pos)
        if (!measured[static_cast<std::size_t>(pos)])
            rest_strides.push_back(digit_stride(d, joint.m, pos));
    const int rest_m = static_cast<int>(rest_strides.size());

    std::vector<std::size_t> astr(pairs.size()), xstr(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        astr[i] = digit_stride(d, joint.m, pairs[i].a);
        xstr[i] = digit_stride(d, joint.m, pairs[i].x);
    }

    std::vector<Cx> residual(dim_pow(d, rest_m));
    for (std::size_t x = 0; x < joint.amps.size(); ++x) {
        const Cx amp = joint.amps[x];
        if (amp == Cx{}) continue;
        Cx w = amp;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const int ad = digit_at(x, astr[i], d);
            const int xd = digit_at(x, xstr[i], d);
            w *= std::conj(bras[i][static_cast<std::size_t>(ad * d + xd)]);
            if (w == Cx{}) break;
        }
        if (w == Cx{}) continue;
        std::size_t rest_index = 0;
        for (const std::size_t s : rest_strides)
            rest_index = rest_index * static_cast<std::size_t>(d)
                         + static_cast<std::size_t>(digit_at(x, s, d));
        residual[rest_index] += w;
    }

    double weight = 0.0;
    for (const Cx& v : residual) weight += std::norm(v);
    if (weight <= kZeroWeight)
        return ProjectionResult{weight, false, StateVector{d, rest_m, {}}};

    const double inv = 1.0 / std::sqrt(weight);
    for (Cx& v : residual) v *= inv;
    return ProjectionResult{weight, true, StateVector{d, rest_m, std::move(residual)}};
}

OutcomeDistribution outcome_distribution(const StateVector& joint,
                                         const std::vector<QuditPair>& pairs) {
    check_pairs(joint, pairs);
    const int d = joint.d;
    const int n = static_cast<int>(pairs.size());

    const LocalOperator rot{d, 2, bell_basis_adjoint(d)};
    StateVector rotated = joint;
    for (const QuditPair& p : pairs) rotated = apply_local(rotated, rot, {p.a, p.x});

    std::vector<std::size_t> strides;
    strides.reserve(2 * pairs.size());
    for (const QuditPair& p : pairs) {
        strides.push_back(digit_stride(d, joint.m, p.a));
        strides.push_back(digit_stride(d, joint.m, p.x));
    }

    OutcomeDistribution dist{d, n, std::vector<double>(dim_pow(d, 2 * n), 0.0)};
    for (std::size_t x = 0; x < rotated.amps.size(); ++x) {
        std::size_t r = 0;
        for (const std::size_t s : strides)
            r = r * static_cast<std::size_t>(d) + static_cast<std::size_t>(digit_at(x, s, d));
        dist.probs[r] += std::norm(rotated.amps[x]);
    }
    return dist;
}

MeasurementResult sample_product_phi(const StateVector& joint,
                                     const std::vector<QuditPair>& pairs,
                                     RngStream& rng) {
    const OutcomeDistribution dist = outcome_distribution(joint, pairs);
    const double u = rng.uniform();

    std::size_t pick = dist.probs.size();
    double acc = 0.0;
    for (std::size_t r = 0; r < dist.probs.size(); ++r) {
        acc += dist.probs[r];
        if (u <= acc) {
            pick = r;
            break;
        }
    }
    if (pick == dist.probs.size()) {
        // u landed past the accumulated total (rounding); take the last
        // outcome that has any weight.
        for (std::size_t r = dist.probs.size(); r-- > 0;)
            if (dist.probs[r] > kZeroWeight) {
                pick = r;
                break;
            }
        if (pick == dist.probs.size())
            throw std::runtime_error("sample_product_phi: empty distribution");
    }

    const Outcome outcome = outcome_from_rank(pick, dist.d, dist.n);
    ProjectionResult pr = project_outcome(joint, pairs, outcome);
    if (!pr.valid)
        throw std::runtime_error("sample_product_phi: sampled outcome has zero weight");
    return MeasurementResult{outcome, dist.probs[pick], std::move(pr.residual)};
}

MeasurementResult measure_xi(const StateVector& joint,
                             const std::vector<QuditPair>& pairs,
                             const GlobalUnitary& upsilon, RngStream& rng) {
    check_pairs(joint, pairs);
    if (upsilon.d != joint.d || upsilon.n != static_cast<int>(pairs.size()))
        throw std::invalid_argument("measure_xi: upsilon shape mismatch");
    check_unitary(upsilon);

    std::vector<int> a_positions;
    a_positions.reserve(pairs.size());
    for (const QuditPair& p : pairs) a_positions.push_back(p.a);

    const StateVector rotated = apply_local(
        joint, LocalOperator{joint.d, upsilon.n, adjoint(upsilon.matrix)}, a_positions);
    return sample_product_phi(rotated, pairs, rng);
}

}  // namespace qtp
