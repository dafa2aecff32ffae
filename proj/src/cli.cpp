#include "qtp/cli.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace qtp {

namespace {

using nlohmann::json;

constexpr double kFidelityThreshold = 1.0 - 1e-9;
constexpr std::size_t kRegisterCap = 200000;  // amplitudes in the joint state

bool exceeds(int d, int m, std::size_t cap) {
    std::size_t v = 1;
    for (int i = 0; i < m; ++i) {
        v *= static_cast<std::size_t>(d);
        if (v > cap) return true;
    }
    return false;
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected an unsigned integer, got '" + s + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("expected an unsigned integer, got '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a number, got '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

GlobalUnitary parse_generator(const std::vector<std::string>& tokens, std::size_t& i,
                              int d, int n) {
    if (i >= tokens.size())
        throw std::invalid_argument("channel: missing unitary generator");
    const std::string name = tokens[i++];
    if (name == "identity") return identity_unitary(d, n);
    if (name == "haar") {
        if (i >= tokens.size()) throw std::invalid_argument("channel: haar needs a seed");
        return random_global_unitary(d, n, parse_u64(tokens[i++]));
    }
    if (name == "yeo-chua") {
        if (i >= tokens.size())
            throw std::invalid_argument("channel: yeo-chua needs theta,phi");
        if (d != 2 || n != 2)
            throw std::invalid_argument("channel: yeo-chua is defined for d=2, n=2");
        const std::vector<std::string> parts = split(tokens[i++], ',');
        if (parts.size() != 2)
            throw std::invalid_argument("channel: yeo-chua needs exactly theta,phi");
        return yeo_chua_upsilon(parse_real(parts[0]), parse_real(parts[1]));
    }
    throw std::invalid_argument("channel: unknown generator '" + name + "'");
}

std::vector<BellLabel> parse_offsets(const std::string& text, int d, int n) {
    const std::vector<std::string> parts = split(text, ',');
    if (parts.size() != static_cast<std::size_t>(2 * n))
        throw std::invalid_argument("channel: offsets need exactly 2n values");
    std::vector<BellLabel> offsets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = parse_int(parts[static_cast<std::size_t>(2 * i)]);
        const int l = parse_int(parts[static_cast<std::size_t>(2 * i + 1)]);
        if (k < 0 || k >= d || l < 0 || l >= d)
            throw std::invalid_argument("channel: offset value out of range");
        offsets[static_cast<std::size_t>(i)] = BellLabel{k, l};
    }
    return offsets;
}

std::string outcome_key(const Outcome& outcome) {
    std::string key;
    for (const BellLabel& l : outcome.labels) {
        if (!key.empty()) key.push_back(',');
        key += std::to_string(l.k);
        key.push_back(',');
        key += std::to_string(l.l);
    }
    return key;
}

ChannelKind kind_for(Protocol p) {
    switch (p) {
        case Protocol::Dn: return ChannelKind::TPS;
        case Protocol::Dpn: return ChannelKind::GES;
        case Protocol::Dppn: return ChannelKind::GES2;
    }
    throw std::invalid_argument("unknown protocol");
}

int write_report(const json& report, const std::string& path, std::ostream& err) {
    if (path.empty()) return 0;
    std::ofstream f(path);
    if (!f) {
        err << "config error: cannot open output file " << path << '\n';
        return 2;
    }
    f << report.dump(2) << '\n';
    return 0;
}

}  // namespace

ChannelSpec parse_channel(const std::string& desc, int d, int n) {
    const std::vector<std::string> tokens = split(desc, ':');
    if (tokens.empty() || tokens[0].empty())
        throw std::invalid_argument("channel: empty descriptor");
    const std::string& kind = tokens[0];
    std::size_t i = 1;
    std::optional<GlobalUnitary> upsilon;
    std::optional<GlobalUnitary> omega;
    if (kind == "ges") {
        upsilon = parse_generator(tokens, i, d, n);
    } else if (kind == "ges2") {
        upsilon = parse_generator(tokens, i, d, n);
        omega = parse_generator(tokens, i, d, n);
    } else if (kind != "tps") {
        throw std::invalid_argument("channel: unknown kind '" + kind + "'");
    }
    std::vector<BellLabel> offsets;
    if (i < tokens.size() && tokens[i].rfind("offsets=", 0) == 0)
        offsets = parse_offsets(tokens[i++].substr(8), d, n);
    if (i != tokens.size())
        throw std::invalid_argument("channel: unexpected tokens in '" + desc + "'");

    if (kind == "tps") return tps_channel(d, n, std::move(offsets));
    if (kind == "ges") return ges_channel(d, n, std::move(*upsilon), std::move(offsets));
    return ges2_channel(d, n, std::move(*upsilon), std::move(*omega), std::move(offsets));
}

void validate(const RunConfig& config) {
    if (config.d < 2) throw std::invalid_argument("d must be >= 2");
    if (config.n < 1) throw std::invalid_argument("n must be >= 1");
    if (exceeds(config.d, 3 * config.n, kRegisterCap))
        throw std::invalid_argument("d^(3n) exceeds the 200000 amplitude cap");
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    protocol_from_name(config.protocol);
}

std::pair<int, int> parse_range(const std::string& text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = parse_int(text);
        return {v, v};
    }
    const int lo = parse_int(text.substr(0, dots));
    const int hi = parse_int(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("range: lower bound exceeds upper bound");
    return {lo, hi};
}

int cmd_teleport(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Protocol proto = Protocol::Dn;
    ChannelSpec spec;
    StateVector file_input;
    bool have_file = false;
    try {
        validate(config);
        proto = protocol_from_name(config.protocol);
        spec = parse_channel(config.channel, config.d, config.n);
        if (spec.kind != kind_for(proto))
            throw std::invalid_argument(
                std::string("protocol ") + protocol_name(proto) + " needs a " +
                channel_kind_name(kind_for(proto)) + " channel, got " +
                channel_kind_name(spec.kind));
        if (!config.input_path.empty()) {
            file_input = read_state_file(config.input_path);
            if (file_input.d != config.d || file_input.m != config.n)
                throw std::invalid_argument("input state file shape mismatch");
            have_file = true;
        }
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }

    json trial_rows = json::array();
    json histogram = json::object();
    double min_fidelity = 2.0;
    double sum_fidelity = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        RngStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        const StateVector input =
            have_file ? file_input : random_state(config.d, config.n, rng);
        const Transcript tr = run_protocol(proto, input, spec, rng);
        min_fidelity = std::min(min_fidelity, tr.fidelity);
        sum_fidelity += tr.fidelity;
        const std::string key = outcome_key(tr.outcome);
        histogram[key] = histogram.value(key, 0) + 1;
        trial_rows.push_back({{"trial", t},
                              {"seed", rng.seed},
                              {"outcome", key},
                              {"fidelity", tr.fidelity}});
    }

    const bool pass = min_fidelity >= kFidelityThreshold;
    const json report = {
        {"command", "teleport"},
        {"config",
         {{"d", config.d},
          {"n", config.n},
          {"protocol", config.protocol},
          {"channel", config.channel},
          {"trials", config.trials},
          {"seed", config.seed},
          {"input", have_file ? config.input_path : "random"}}},
        {"trials", trial_rows},
        {"aggregate",
         {{"min_fidelity", min_fidelity},
          {"mean_fidelity", sum_fidelity / config.trials},
          {"outcome_histogram", histogram}}},
        {"fidelity_threshold", kFidelityThreshold},
        {"pass", pass},
        {"timestamp", iso_timestamp()}};
    if (const int rc = write_report(report, config.output_path, err)) return rc;

    out << "teleport " << config.protocol << " d=" << config.d << " n=" << config.n
        << " trials=" << config.trials << " min_fidelity=" << min_fidelity
        << (pass ? " PASS" : " FAIL") << '\n';
    return pass ? 0 : 1;
}

namespace {

struct PropertyResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    json cases = json::array();

    bool pass() const { return max_deviation <= tolerance; }
};

// weyl_v with an optional deliberate corruption of one matrix phase, so
// the pairing-identity suite can demonstrate that it detects faults.
LocalOperator verify_weyl_v(int d, BellLabel label, bool fault) {
    LocalOperator v = weyl_v(d, label);
    if (fault && label.k == 0 && label.l == 1)
        v.matrix(mod_add(1, 1, d), 1) *= -1.0;
    return v;
}

double max_state_diff(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        worst = std::max(worst, std::abs(a.amps[i] - b.amps[i]));
    return worst;
}

StateVector measurement_frame(const JointState& js, const ChannelSpec& spec) {
    if (!spec.upsilon) return js.joint;
    return apply_local(js.joint,
                       LocalOperator{spec.d, spec.n, adjoint(spec.upsilon->matrix)},
                       alice_a_positions(spec.n));
}

std::vector<ChannelSpec> verify_specs(int d, int n, std::uint64_t seed) {
    return {tps_channel(d, n),
            ges_channel(d, n, random_global_unitary(d, n, seed)),
            ges2_channel(d, n, random_global_unitary(d, n, seed),
                         random_global_unitary(d, n, seed + 1))};
}

Protocol protocol_for(const ChannelSpec& spec) {
    switch (spec.kind) {
        case ChannelKind::TPS: return Protocol::Dn;
        case ChannelKind::GES: return Protocol::Dpn;
        case ChannelKind::GES2: return Protocol::Dppn;
    }
    throw std::invalid_argument("unknown kind");
}

}  // namespace

int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
    if (config.d_lo < 2 || config.d_lo > config.d_hi || config.d_hi > 16 ||
        config.n_lo < 1 || config.n_lo > config.n_hi || config.n_hi > 4) {
        err << "config error: verify supports d in [2,16] and n in [1,4]\n";
        return 2;
    }

    PropertyResult unitarity{"weyl_unitarity", 0.0, 1e-12, json::array()};
    PropertyResult gram{"bell_basis_gram", 0.0, 1e-12, json::array()};
    PropertyResult pairing{"pair_generation_identity", 0.0, 1e-12, json::array()};
    PropertyResult uniform{"uniform_outcome_law", 0.0, 1e-10, json::array()};
    PropertyResult reduction{"local_product_reduction", 0.0, 1e-10, json::array()};
    PropertyResult nosig{"no_signaling_average", 0.0, 1e-10, json::array()};

    for (int d = config.d_lo; d <= config.d_hi; ++d) {
        const StateVector pair00 = phi00(d);
        double worst_u = 0.0, worst_r = 0.0;
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                const BellLabel label{k, l};
                worst_u = std::max(worst_u, unitarity_error(weyl_v(d, label).matrix));
                worst_u = std::max(worst_u, unitarity_error(weyl_u(d, label).matrix));
                const StateVector lhs = apply_local(pair00, weyl_u(d, label), {0});
                const StateVector rhs = apply_local(
                    pair00, verify_weyl_v(d, label, config.inject_fault), {1});
                worst_r = std::max(worst_r, max_state_diff(lhs, rhs));
            }
        unitarity.max_deviation = std::max(unitarity.max_deviation, worst_u);
        unitarity.cases.push_back({{"d", d}, {"deviation", worst_u}});
        pairing.max_deviation = std::max(pairing.max_deviation, worst_r);
        pairing.cases.push_back({{"d", d}, {"deviation", worst_r}});

        const std::vector<StateVector> basis = phi_basis(d);
        double worst_g = 0.0;
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const Cx g = inner(basis[i], basis[j]);
                worst_g = std::max(worst_g, std::abs(g - (i == j ? Cx{1.0, 0.0} : Cx{})));
            }
        gram.max_deviation = std::max(gram.max_deviation, worst_g);
        gram.cases.push_back({{"d", d}, {"deviation", worst_g}});
    }

    std::uint64_t combo = 0;
    for (int d = config.d_lo; d <= config.d_hi; ++d) {
        for (int n = config.n_lo; n <= config.n_hi; ++n, ++combo) {
            if (exceeds(d, 3 * n, kRegisterCap)) continue;
            const std::uint64_t cseed = derive_seed(config.seed, combo);
            const StateVector input = random_state(d, n, cseed);
            const std::vector<QuditPair> pairs = measurement_pairs(n);
            const double want = 1.0 / static_cast<double>(dim_pow(d, 2 * n));

            double worst_uni = 0.0;
            for (const ChannelSpec& spec : verify_specs(d, n, cseed)) {
                const JointState js = prepare_joint(protocol_for(spec), input, spec);
                const OutcomeDistribution dist =
                    outcome_distribution(measurement_frame(js, spec), pairs);
                for (double p : dist.probs)
                    worst_uni = std::max(worst_uni, std::abs(p - want));
            }
            uniform.max_deviation = std::max(uniform.max_deviation, worst_uni);
            uniform.cases.push_back({{"d", d}, {"n", n}, {"deviation", worst_uni}});

            // D'_n with a product-of-corrections upsilon against plain D_n
            // over the correspondingly relabeled pair channel: residuals
            // must agree per announced outcome.
            RngStream lrng(derive_seed(cseed, 1));
            std::vector<LocalOperator> parts;
            std::vector<BellLabel> tps_offsets;
            for (int i = 0; i < n; ++i) {
                const int k = static_cast<int>(lrng.uniform() * d);
                const int l = static_cast<int>(lrng.uniform() * d);
                parts.push_back(weyl_v(d, BellLabel{k, l}));
                tps_offsets.push_back(BellLabel{k, (d - l) % d});
            }
            const ChannelSpec ges = ges_channel(d, n, local_product_unitary(parts));
            const ChannelSpec tps = tps_channel(d, n, tps_offsets);
            const JointState jg = prepare_joint(Protocol::Dpn, input, ges);
            const JointState jt = prepare_joint(Protocol::Dn, input, tps);
            const StateVector rotated = measurement_frame(jg, ges);
            double worst_red = 0.0;
            for (std::size_t r = 0; r < dim_pow(d, 2 * n); ++r) {
                const Outcome raw = outcome_from_rank(r, d, n);
                const ProjectionResult pg = project_outcome(rotated, pairs, raw);
                // the pair-channel run that announces `raw` measured raw + offsets
                Outcome tps_raw = raw;
                for (std::size_t i = 0; i < tps_raw.labels.size(); ++i) {
                    tps_raw.labels[i].k = mod_add(raw.labels[i].k, tps.offsets[i].k, d);
                    tps_raw.labels[i].l = mod_add(raw.labels[i].l, tps.offsets[i].l, d);
                }
                const ProjectionResult pt = project_outcome(jt.joint, pairs, tps_raw);
                if (!pg.valid || !pt.valid) {
                    worst_red = 1.0;
                    continue;
                }
                worst_red =
                    std::max(worst_red, 1.0 - std::abs(inner(pg.residual, pt.residual)));
            }
            reduction.max_deviation = std::max(reduction.max_deviation, worst_red);
            reduction.cases.push_back({{"d", d}, {"n", n}, {"deviation", worst_red}});

            if (!exceeds(d, 5 * n, 2000000)) {
                double worst_ns = 0.0;
                const Matrix eye = Matrix::identity(static_cast<int>(dim_pow(d, n)));
                for (const ChannelSpec& spec : verify_specs(d, n, cseed)) {
                    const JointState js = prepare_joint(protocol_for(spec), input, spec);
                    const StateVector frame = measurement_frame(js, spec);
                    Matrix avg(static_cast<int>(dim_pow(d, n)),
                               static_cast<int>(dim_pow(d, n)));
                    for (std::size_t r = 0; r < dim_pow(d, 2 * n); ++r) {
                        const ProjectionResult pr =
                            project_outcome(frame, pairs, outcome_from_rank(r, d, n));
                        if (!pr.valid) continue;
                        for (int i = 0; i < avg.rows; ++i)
                            for (int j = 0; j < avg.cols; ++j)
                                avg(i, j) += pr.weight *
                                             pr.residual.amps[static_cast<std::size_t>(i)] *
                                             std::conj(pr.residual.amps[static_cast<std::size_t>(j)]);
                    }
                    for (int i = 0; i < avg.rows; ++i)
                        for (int j = 0; j < avg.cols; ++j)
                            worst_ns = std::max(
                                worst_ns,
                                std::abs(avg(i, j) - eye(i, j) / static_cast<double>(
                                                                     dim_pow(d, n))));
                }
                nosig.max_deviation = std::max(nosig.max_deviation, worst_ns);
                nosig.cases.push_back({{"d", d}, {"n", n}, {"deviation", worst_ns}});
            }
        }
    }

    const std::vector<const PropertyResult*> props = {&unitarity, &gram,    &pairing,
                                                      &uniform,   &reduction, &nosig};
    bool all_pass = true;
    json prop_rows = json::array();
    for (const PropertyResult* p : props) {
        all_pass = all_pass && p->pass();
        prop_rows.push_back({{"name", p->name},
                             {"max_deviation", p->max_deviation},
                             {"tolerance", p->tolerance},
                             {"pass", p->pass()},
                             {"cases", p->cases}});
        out << "verify " << p->name << " max_deviation=" << p->max_deviation
            << " tolerance=" << p->tolerance << (p->pass() ? " PASS" : " FAIL") << '\n';
    }

    const json report = {{"command", "verify"},
                         {"config",
                          {{"d_lo", config.d_lo},
                           {"d_hi", config.d_hi},
                           {"n_lo", config.n_lo},
                           {"n_hi", config.n_hi},
                           {"seed", config.seed},
                           {"inject_fault", config.inject_fault}}},
                         {"properties", prop_rows},
                         {"pass", all_pass},
                         {"timestamp", iso_timestamp()}};
    if (const int rc = write_report(report, config.output_path, err)) return rc;
    return all_pass ? 0 : 1;
}

}  // namespace qtp
