// Generates a clustered synthetic ratings + trust dataset in the input
// format of the pipeline. Users and items are split into taste clusters;
// ratings are high inside a cluster and low across, so collaborative
// signals are recoverable.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "cys/rng.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"synthetic clustered ratings/trust generator"};
    std::size_t users = 200, items = 300, entries = 4000, clusters = 4;
    std::uint64_t seed = 1;
    bool timestamps = false;
    std::string out = "data/synth";
    app.add_option("--users", users);
    app.add_option("--items", items);
    app.add_option("--entries", entries);
    app.add_option("--clusters", clusters);
    app.add_option("--seed", seed);
    app.add_flag("--timestamps", timestamps, "append increasing timestamps");
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);

    cys::Rng rng(seed);
    fs::create_directories(out);

    std::ofstream ratings(fs::path(out) / "ratings.txt");
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::int64_t ts = 1;
    std::size_t written = 0;
    while (written < entries) {
        std::size_t u = rng.next_below(users);
        std::size_t uc = u % clusters;
        bool within = rng.next_double() < 0.85;
        std::size_t i;
        do {
            i = rng.next_below(items);
        } while ((i % clusters == uc) != within);
        if (used.count({u, i})) continue;
        used.insert({u, i});
        double rating = within ? 2.5 + 0.5 * static_cast<double>(rng.next_below(4))   // 2.5..4
                               : 0.5 + 0.5 * static_cast<double>(rng.next_below(3));  // 0.5..1.5
        ratings << 'u' << u << " i" << i << ' ' << rating;
        if (timestamps) ratings << ' ' << ts++;
        ratings << '\n';
        ++written;
    }

    std::ofstream trust(fs::path(out) / "trust.txt");
    std::size_t trust_edges = users * 2;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (seen.size() < trust_edges) {
        std::size_t a = rng.next_below(users);
        std::size_t b = rng.next_below(users);
        if (a == b) continue;
        bool within = rng.next_double() < 0.8;
        if ((a % clusters == b % clusters) != within) continue;
        if (!seen.insert({a, b}).second) continue;
        trust << 'u' << a << " u" << b << " 1\n";
    }

    std::cout << "wrote " << written << " ratings and " << seen.size() << " trust edges under "
              << out << '\n';
    return 0;
}
