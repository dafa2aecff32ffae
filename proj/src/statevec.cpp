#include "qtp/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qtp/rng.hpp"

namespace qtp {

namespace {

void check_register_shape(int d, int m) {
    if (d < 2) throw std::invalid_argument("qudit dimension must be >= 2");
    if (m < 1) throw std::invalid_argument("qudit count must be >= 1");
}

// Walks every combination of digit values for the given positions,
// invoking f(base_offset) once per combination. Digits not listed
// contribute 0 to the offset.
template <typename F>
void for_each_offset(const std::vector<std::size_t>& strides, int d, F&& f) {
    std::vector<int> digits(strides.size(), 0);
    std::size_t offset = 0;
    for (;;) {
        f(offset);
        bool advanced = false;
        for (std::size_t p = strides.size(); p-- > 0;) {
            if (++digits[p] < d) {
                offset += strides[p];
                advanced = true;
                break;
            }
            digits[p] = 0;
            offset -= strides[p] * static_cast<std::size_t>(d - 1);
        }
        if (!advanced) return;
    }
}

std::vector<std::size_t> strides_for(const std::vector<int>& positions, int d, int m) {
    std::vector<std::size_t> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        out[i] = digit_stride(d, m, positions[i]);
    return out;
}

std::vector<int> complement_positions(const std::vector<int>& targets, int m) {
    std::vector<bool> taken(static_cast<std::size_t>(m), false);
    for (int t : targets) taken[static_cast<std::size_t>(t)] = true;
    std::vector<int> rest;
    rest.reserve(static_cast<std::size_t>(m) - targets.size());
    for (int p = 0; p < m; ++p)
        if (!taken[static_cast<std::size_t>(p)]) rest.push_back(p);
    return rest;
}

void check_targets(const std::vector<int>& targets, int m, const char* who) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int t : targets) {
        if (t < 0 || t >= m)
            throw std::invalid_argument(std::string(who) + ": target out of range");
        if (seen[static_cast<std::size_t>(t)])
            throw std::invalid_argument(std::string(who) + ": repeated target");
        seen[static_cast<std::size_t>(t)] = true;
    }
}

// Offsets of all d^k digit combinations over the given strides, in the
// big-endian order of the digit group.
std::vector<std::size_t> group_offsets(const std::vector<std::size_t>& strides, int d) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < strides.size(); ++i) count *= static_cast<std::size_t>(d);
    std::vector<std::size_t> out(count, 0);
    std::size_t repeat = count;
    for (std::size_t t = 0; t < strides.size(); ++t) {
        repeat /= static_cast<std::size_t>(d);
        for (std::size_t x = 0; x < count; ++x)
            out[x] += strides[t] * ((x / repeat) % static_cast<std::size_t>(d));
    }
    return out;
}

}  // namespace

std::size_t dim_pow(int d, int m) {
    std::size_t n = 1;
    for (int i = 0; i < m; ++i) {
        if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(d))
            throw std::overflow_error("dim_pow: register too large");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

std::size_t digit_stride(int d, int m, int pos) {
    return dim_pow(d, m - 1 - pos);
}

StateVector make_state(int d, int m, std::vector<Cx> amps) {
    check_register_shape(d, m);
    if (amps.size() != dim_pow(d, m))
        throw std::invalid_argument("make_state: amplitude count mismatch");
    double nsq = 0.0;
    for (const Cx& a : amps) nsq += std::norm(a);
    if (!(nsq > 0.0) || !std::isfinite(nsq))
        throw std::invalid_argument("make_state: zero or non-finite amplitudes");
    const double inv = 1.0 / std::sqrt(nsq);
    for (Cx& a : amps) a *= inv;
    return StateVector{d, m, std::move(amps)};
}

StateVector basis_state(int d, int m, std::size_t index) {
    check_register_shape(d, m);
    const std::size_t n = dim_pow(d, m);
    if (index >= n) throw std::invalid_argument("basis_state: index out of range");
    std::vector<Cx> amps(n);
    amps[index] = Cx{1.0, 0.0};
    return StateVector{d, m, std::move(amps)};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    if (a.d != b.d) throw std::invalid_argument("tensor: dimension mismatch");
    const std::size_t nb = b.amps.size();
    std::vector<Cx> amps(a.amps.size() * nb);
    for (std::size_t x = 0; x < a.amps.size(); ++x) {
        const Cx ax = a.amps[x];
        for (std::size_t y = 0; y < nb; ++y) amps[x * nb + y] = ax * b.amps[y];
    }
    return StateVector{a.d, a.m + b.m, std::move(amps)};
}

StateVector apply_local(const StateVector& s, const LocalOperator& op,
                        const std::vector<int>& targets) {
    if (op.d != s.d) throw std::invalid_argument("apply_local: dimension mismatch");
    if (static_cast<int>(targets.size()) != op.arity)
        throw std::invalid_argument("apply_local: arity/target mismatch");
    check_targets(targets, s.m, "apply_local");
    const std::size_t dk = dim_pow(s.d, op.arity);
    if (op.matrix.rows != static_cast<int>(dk) || op.matrix.cols != static_cast<int>(dk))
        throw std::invalid_argument("apply_local: operator matrix has wrong side");

    const auto toff = group_offsets(strides_for(targets, s.d, s.m), s.d);
    const auto rest = strides_for(complement_positions(targets, s.m), s.d, s.m);

    StateVector out{s.d, s.m, std::vector<Cx>(s.amps.size())};
    std::vector<Cx> in(dk);
    for_each_offset(rest, s.d, [&](std::size_t base) {
        for (std::size_t b = 0; b < dk; ++b) in[b] = s.amps[base + toff[b]];
        for (std::size_t r = 0; r < dk; ++r) {
            Cx acc{};
            const Cx* row = &op.matrix.a[r * dk];
            for (std::size_t c = 0; c < dk; ++c) acc += row[c] * in[c];
            out.amps[base + toff[r]] = acc;
        }
    });
    return out;
}

Cx inner(const StateVector& a, const StateVector& b) {
    if (a.d != b.d || a.m != b.m)
        throw std::invalid_argument("inner: shape mismatch");
    Cx acc{};
    for (std::size_t x = 0; x < a.amps.size(); ++x)
        acc += std::conj(a.amps[x]) * b.amps[x];
    return acc;
}

double norm(const StateVector& s) {
    double nsq = 0.0;
    for (const Cx& a : s.amps) nsq += std::norm(a);
    return std::sqrt(nsq);
}

Matrix reduced_density(const StateVector& s, const std::vector<int>& keep) {
    check_targets(keep, s.m, "reduced_density");
    const std::size_t dk = dim_pow(s.d, static_cast<int>(keep.size()));
    const auto koff = group_offsets(strides_for(keep, s.d, s.m), s.d);
    const auto rest = strides_for(complement_positions(keep, s.m), s.d, s.m);

    Matrix rho(static_cast<int>(dk), static_cast<int>(dk));
    std::vector<Cx> v(dk);
    for_each_offset(rest, s.d, [&](std::size_t base) {
        for (std::size_t r = 0; r < dk; ++r) v[r] = s.amps[base + koff[r]];
        for (std::size_t r = 0; r < dk; ++r) {
            const Cx vr = v[r];
            for (std::size_t c = 0; c < dk; ++c)
                rho.a[r * dk + c] += vr * std::conj(v[c]);
        }
    });
    return rho;
}

StateVector random_state(int d, int m, RngStream& rng) {
    check_register_shape(d, m);
    std::vector<Cx> amps(dim_pow(d, m));
    for (Cx& a : amps) a = rng.gaussian_complex();
    return make_state(d, m, std::move(amps));
}

StateVector random_state(int d, int m, std::uint64_t seed) {
    RngStream rng(seed);
    return random_state(d, m, rng);
}

StateVector read_state_file(std::istream& in) {
    int d = 0, m = 0;
    if (!(in >> d >> m)) throw std::runtime_error("state file: bad header");
    check_register_shape(d, m);
    const std::size_t n = dim_pow(d, m);
    std::vector<Cx> amps(n);
    for (std::size_t x = 0; x < n; ++x) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im))
            throw std::runtime_error("state file: truncated amplitude list");
        amps[x] = Cx{re, im};
    }
    return make_state(d, m, std::move(amps));
}

StateVector read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("state file: cannot open " + path);
    return read_state_file(in);
}

void write_state_file(const StateVector& s, std::ostream& out) {
    out << s.d << ' ' << s.m << '\n';
    out.precision(17);
    for (const Cx& a : s.amps) out << a.real() << ' ' << a.imag() << '\n';
}

void write_state_file(const StateVector& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("state file: cannot open " + path);
    write_state_file(s, out);
}

}  // namespace qtp
