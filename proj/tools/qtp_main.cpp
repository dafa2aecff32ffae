#include <iostream>

#include "CLI11.hpp"

#include "qtp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qudit teleportation simulator"};
    app.require_subcommand(1);

    qtp::RunConfig rc;
    CLI::App* tp = app.add_subcommand("teleport", "run a batch of teleportation trials");
    tp->add_option("--d", rc.d, "qudit dimension")->required();
    tp->add_option("--n", rc.n, "number of teleported qudits")->required();
    tp->add_option("--protocol", rc.protocol, "dn | dpn | dppn");
    tp->add_option("--channel", rc.channel,
                   "channel descriptor, e.g. tps | ges:haar:7 | "
                   "ges:yeo-chua:0.7,1.1 | ges2:haar:3:haar:4");
    tp->add_option("--trials", rc.trials, "number of independent runs");
    tp->add_option("--seed", rc.seed, "base seed; trial t derives its own stream");
    tp->add_option("--input", rc.input_path, "state-vector file for the input state");
    tp->add_option("--output", rc.output_path, "JSON report path");

    std::string d_range = "2..3";
    std::string n_range = "1..2";
    qtp::VerifyConfig vc;
    CLI::App* vf = app.add_subcommand("verify", "run the invariant suites");
    vf->add_option("--d", d_range, "dimension range, e.g. 3 or 2..5");
    vf->add_option("--n", n_range, "pair-count range, e.g. 1 or 1..2");
    vf->add_option("--seed", vc.seed, "seed for randomized checks");
    vf->add_option("--output", vc.output_path, "JSON report path");
    vf->add_flag("--inject-fault", vc.inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (tp->parsed()) return qtp::cmd_teleport(rc, std::cout, std::cerr);
        const std::pair<int, int> dr = qtp::parse_range(d_range);
        const std::pair<int, int> nr = qtp::parse_range(n_range);
        vc.d_lo = dr.first;
        vc.d_hi = dr.second;
        vc.n_lo = nr.first;
        vc.n_hi = nr.second;
        return qtp::cmd_verify(vc, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
}
