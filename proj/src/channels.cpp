#include "qtp/channels.hpp"

#include <cmath>
#include <cstdio>

#include "qtp/rng.hpp"

namespace qtp {

namespace {

std::vector<BellLabel> normalize_offsets(int d, int n, std::vector<BellLabel> offsets) {
    if (offsets.empty()) offsets.assign(static_cast<std::size_t>(n), BellLabel{0, 0});
    if (offsets.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("channel: expected n offset labels");
    for (const BellLabel& o : offsets)
        if (o.k < 0 || o.k >= d || o.l < 0 || o.l >= d)
            throw std::invalid_argument("channel: offset label out of range");
    return offsets;
}

void check_shape(int d, int n) {
    if (d < 2) throw std::invalid_argument("channel: d must be >= 2");
    if (n < 1) throw std::invalid_argument("channel: n must be >= 1");
}

std::vector<int> even_positions(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = 2 * i;
    return p;
}

std::vector<int> odd_positions(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = 2 * i + 1;
    return p;
}

}  // namespace

const char* channel_kind_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::TPS: return "tps";
        case ChannelKind::GES: return "ges";
        case ChannelKind::GES2: return "ges2";
    }
    throw std::invalid_argument("channel: unknown kind");
}

ChannelSpec tps_channel(int d, int n, std::vector<BellLabel> offsets) {
    check_shape(d, n);
    return ChannelSpec{d, n, ChannelKind::TPS, normalize_offsets(d, n, std::move(offsets)),
                       std::nullopt, std::nullopt};
}

ChannelSpec ges_channel(int d, int n, GlobalUnitary upsilon,
                        std::vector<BellLabel> offsets) {
    check_shape(d, n);
    if (upsilon.d != d || upsilon.n != n)
        throw std::invalid_argument("channel: upsilon shape mismatch");
    check_unitary(upsilon);
    return ChannelSpec{d, n, ChannelKind::GES, normalize_offsets(d, n, std::move(offsets)),
                       std::move(upsilon), std::nullopt};
}

ChannelSpec ges2_channel(int d, int n, GlobalUnitary upsilon, GlobalUnitary omega,
                         std::vector<BellLabel> offsets) {
    check_shape(d, n);
    if (upsilon.d != d || upsilon.n != n)
        throw std::invalid_argument("channel: upsilon shape mismatch");
    if (omega.d != d || omega.n != n)
        throw std::invalid_argument("channel: omega shape mismatch");
    check_unitary(upsilon);
    check_unitary(omega);
    return ChannelSpec{d, n, ChannelKind::GES2, normalize_offsets(d, n, std::move(offsets)),
                       std::move(upsilon), std::move(omega)};
}

void check_unitary(const GlobalUnitary& u) {
    const std::size_t side = dim_pow(u.d, u.n);
    if (u.matrix.rows != static_cast<int>(side) || u.matrix.cols != static_cast<int>(side))
        throw std::invalid_argument("channel: unitary matrix has wrong side");
    if (unitarity_error(u.matrix) > 1e-10)
        throw std::invalid_argument("channel: matrix is not unitary (tag: " + u.tag + ")");
}

StateVector build_channel(const ChannelSpec& spec) {
    check_shape(spec.d, spec.n);
    if (spec.offsets.size() != static_cast<std::size_t>(spec.n))
        throw std::invalid_argument("build_channel: expected n offset labels");

    StateVector state = gbs_state(spec.d, spec.offsets[0]);
    for (int i = 1; i < spec.n; ++i)
        state = tensor(state, gbs_state(spec.d, spec.offsets[static_cast<std::size_t>(i)]));

    if (spec.kind == ChannelKind::GES || spec.kind == ChannelKind::GES2) {
        if (!spec.upsilon) throw std::invalid_argument("build_channel: GES needs upsilon");
        check_unitary(*spec.upsilon);
        state = apply_local(state, LocalOperator{spec.d, spec.n, spec.upsilon->matrix},
                            even_positions(spec.n));
    }
    if (spec.kind == ChannelKind::GES2) {
        if (!spec.omega) throw std::invalid_argument("build_channel: GES2 needs omega");
        check_unitary(*spec.omega);
        state = apply_local(state, LocalOperator{spec.d, spec.n, spec.omega->matrix},
                            odd_positions(spec.n));
    } else if (spec.omega) {
        throw std::invalid_argument("build_channel: omega given for a non-GES2 kind");
    }
    if (spec.kind == ChannelKind::TPS && spec.upsilon)
        throw std::invalid_argument("build_channel: upsilon given for a TPS kind");
    return state;
}

GlobalUnitary identity_unitary(int d, int n) {
    check_shape(d, n);
    return GlobalUnitary{d, n, Matrix::identity(static_cast<int>(dim_pow(d, n))),
                         "identity"};
}

GlobalUnitary local_product_unitary(const std::vector<LocalOperator>& parts) {
    if (parts.empty()) throw std::invalid_argument("local_product_unitary: no parts");
    const int d = parts[0].d;
    Matrix m = Matrix::identity(1);
    for (const LocalOperator& p : parts) {
        if (p.d != d) throw std::invalid_argument("local_product_unitary: mixed dimensions");
        if (p.arity != 1)
            throw std::invalid_argument("local_product_unitary: parts must be single-qudit");
        m = kron(m, p.matrix);
    }
    GlobalUnitary u{d, static_cast<int>(parts.size()), std::move(m), "local-product"};
    check_unitary(u);
    return u;
}

GlobalUnitary yeo_chua_upsilon(double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    Matrix m(4, 4);
    m(0, 0) = ct;
    m(3, 0) = st;
    m(1, 1) = -sp;
    m(2, 1) = cp;
    m(1, 2) = cp;
    m(2, 2) = sp;
    m(0, 3) = -st;
    m(3, 3) = ct;
    char tag[64];
    std::snprintf(tag, sizeof tag, "yeo-chua(%.17g,%.17g)", theta, phi);
    return GlobalUnitary{2, 2, std::move(m), tag};
}

GlobalUnitary random_global_unitary(int d, int n, std::uint64_t seed, std::size_t cap) {
    check_shape(d, n);
    const std::size_t side = dim_pow(d, n);
    if (side > cap)
        throw std::invalid_argument("random_global_unitary: d^n exceeds cap");

    RngStream rng(seed);
    Matrix m(static_cast<int>(side), static_cast<int>(side));
    for (Cx& v : m.a) v = rng.gaussian_complex();

    // Modified Gram-Schmidt on columns. Dividing each pivot column by its
    // own norm keeps the implicit R diagonal positive real, which pins the
    // phase freedom and makes the draw Haar-distributed.
    for (std::size_t j = 0; j < side; ++j) {
        double nsq = 0.0;
        for (std::size_t i = 0; i < side; ++i) nsq += std::norm(m.a[i * side + j]);
        const double inv = 1.0 / std::sqrt(nsq);
        for (std::size_t i = 0; i < side; ++i) m.a[i * side + j] *= inv;
        for (std::size_t j2 = j + 1; j2 < side; ++j2) {
            Cx dot{};
            for (std::size_t i = 0; i < side; ++i)
                dot += std::conj(m.a[i * side + j]) * m.a[i * side + j2];
            for (std::size_t i = 0; i < side; ++i)
                m.a[i * side + j2] -= dot * m.a[i * side + j];
        }
    }
    char tag[48];
    std::snprintf(tag, sizeof tag, "haar(%llu)", static_cast<unsigned long long>(seed));
    return GlobalUnitary{d, n, std::move(m), tag};
}

}  // namespace qtp
