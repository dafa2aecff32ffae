#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtp/matrix.hpp"

namespace qtp {

/*
 * Dense state vector for a register of m qudits, each of dimension d.
 *
 * Indexing is big-endian in the qudit digits: basis index
 *   x = sum_t j_t * d^(m-1-t)
 * so qudit 0 is the most significant digit. All operations below follow
 * this convention; tensor(a, b) puts a's qudits in front of b's.
 */
struct StateVector {
    int d = 0;                // qudit dimension, >= 2
    int m = 0;                // number of qudits, >= 1
    std::vector<Cx> amps;     // d^m amplitudes
};

// Operator on `arity` qudits of dimension d: a d^arity square matrix.
// Row/column digit order matches the target order given to apply_local.
struct LocalOperator {
    int d = 0;
    int arity = 1;
    Matrix matrix;
};

// d^m as a size, with an overflow guard
std::size_t dim_pow(int d, int m);

// stride of qudit position `pos` in the flat index: d^(m-1-pos)
std::size_t digit_stride(int d, int m, int pos);

// Normalizes the given amplitudes. Throws on shape mismatch or zero input.
StateVector make_state(int d, int m, std::vector<Cx> amps);

// |index> in the computational basis
StateVector basis_state(int d, int m, std::size_t index);

StateVector tensor(const StateVector& a, const StateVector& b);

// Applies op to the listed qudits (identity elsewhere). targets[0] is the
// operator's most significant digit. Targets may be in any order but must
// be distinct and in range. The full d^m x d^m matrix is never formed.
StateVector apply_local(const StateVector& s, const LocalOperator& op,
                        const std::vector<int>& targets);

Cx inner(const StateVector& a, const StateVector& b);

double norm(const StateVector& s);

// Traces out every qudit not listed in `keep`. keep[0] becomes the most
// significant digit of the reduced index.
Matrix reduced_density(const StateVector& s, const std::vector<int>& keep);

// Amplitudes i.i.d. complex standard Gaussian, then normalized.
StateVector random_state(int d, int m, std::uint64_t seed);
struct RngStream;
StateVector random_state(int d, int m, RngStream& rng);

/*
 * Text format for state-vector files:
 *   line 1: "d m"
 *   then d^m lines "re im" in index order
 */
StateVector read_state_file(std::istream& in);
StateVector read_state_file(const std::string& path);
void write_state_file(const StateVector& s, std::ostream& out);
void write_state_file(const StateVector& s, const std::string& path);

}  // namespace qtp
