#include "qtp/weyl.hpp"

#include <cmath>

namespace qtp {

namespace {

void check_label(int d, BellLabel label) {
    if (d < 2) throw std::invalid_argument("weyl: dimension must be >= 2");
    if (label.k < 0 || label.k >= d || label.l < 0 || label.l >= d)
        throw std::invalid_argument("weyl: label out of range");
}

}  // namespace

int mod_add(int j, int l, int d) {
    if (d < 2) throw std::invalid_argument("mod_add: dimension must be >= 2");
    if (j < 0 || j >= d || l < 0 || l >= d)
        throw std::invalid_argument("mod_add: digit out of range");
    const int s = j + l;
    return s < d ? s : s - d;
}

LocalOperator weyl_v(int d, BellLabel label) {
    check_label(d, label);
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) {
        const double arg = 2.0 * M_PI * j * label.k / d;
        m(mod_add(j, label.l, d), j) = Cx{std::cos(arg), std::sin(arg)};
    }
    return LocalOperator{d, 1, std::move(m)};
}

LocalOperator weyl_u(int d, BellLabel label) {
    LocalOperator v = weyl_v(d, label);
    return LocalOperator{d, 1, transpose(v.matrix)};
}

StateVector phi00(int d) {
    if (d < 2) throw std::invalid_argument("phi00: dimension must be >= 2");
    std::vector<Cx> amps(static_cast<std::size_t>(d) * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        amps[static_cast<std::size_t>(j) * d + j] = Cx{a, 0.0};
    return StateVector{d, 2, std::move(amps)};
}

StateVector gbs_state(int d, BellLabel label) {
    return apply_local(phi00(d), weyl_v(d, label), {1});
}

std::vector<StateVector> phi_basis(int d) {
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(d) * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out.push_back(gbs_state(d, BellLabel{k, l}));
    return out;
}

}  // namespace qtp
