#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtp/weyl.hpp"

namespace qtp {

enum class ChannelKind { TPS, GES, GES2 };

const char* channel_kind_name(ChannelKind kind);

// Unitary acting jointly on n qudits of dimension d. The tag records how
// the matrix was produced (generator name and parameters), for reports.
struct GlobalUnitary {
    int d = 0;
    int n = 0;
    Matrix matrix;
    std::string tag;
};

/*
 * Description of the 2n-qudit channel shared by Alice and Bob, laid out
 * A1 B1 A2 B2 ... An Bn (A's at even positions, B's at odd).
 *
 *   TPS   tensor product of pair states |Phi_(offsets[i])>
 *   GES   upsilon applied to the A qudits of the TPS state
 *   GES2  additionally omega applied to the B qudits
 */
struct ChannelSpec {
    int d = 0;
    int n = 0;
    ChannelKind kind = ChannelKind::TPS;
    std::vector<BellLabel> offsets;        // length n
    std::optional<GlobalUnitary> upsilon;  // required for GES, GES2
    std::optional<GlobalUnitary> omega;    // required for GES2
};

// Factories normalize the offsets list (empty means all (0,0)) and check
// shapes up front.
ChannelSpec tps_channel(int d, int n, std::vector<BellLabel> offsets = {});
ChannelSpec ges_channel(int d, int n, GlobalUnitary upsilon,
                        std::vector<BellLabel> offsets = {});
ChannelSpec ges2_channel(int d, int n, GlobalUnitary upsilon, GlobalUnitary omega,
                         std::vector<BellLabel> offsets = {});

// Throws unless u has shape d^n and ||M'M - I||_max <= 1e-10.
void check_unitary(const GlobalUnitary& u);

// Materializes the 2n-qudit channel state for the spec; normalized.
StateVector build_channel(const ChannelSpec& spec);

GlobalUnitary identity_unitary(int d, int n);

// Tensor product of n single-qudit unitaries, tagged "local-product".
GlobalUnitary local_product_unitary(const std::vector<LocalOperator>& parts);

/*
 * The two-pair entangling rotation (d=2, n=2) with column action
 *   |00> -> cos(t)|00> + sin(t)|11>      |11> -> -sin(t)|00> + cos(t)|11>
 *   |01> -> -sin(p)|01> + cos(p)|10>     |10> ->  cos(p)|01> + sin(p)|10>
 */
GlobalUnitary yeo_chua_upsilon(double theta, double phi);

// Haar-distributed d^n unitary: complex Gaussian matrix, columns
// orthonormalized with the R diagonal kept positive real; seed-stable.
GlobalUnitary random_global_unitary(int d, int n, std::uint64_t seed,
                                    std::size_t cap = 1024);

}  // namespace qtp
