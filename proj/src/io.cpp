#include "cys/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "cys/error.hpp"

namespace cys {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool skip_line(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

double parse_real(const std::string& tok, const char* what, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": non-numeric " + what + " '" + tok +
                         "'");
    }
}

std::int64_t parse_int(const std::string& tok, const char* what, std::size_t lineno) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(lineno) + ": non-integer " + what + " '" + tok +
                         "'");
    }
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    return in;
}

}  // namespace

InteractionStore load_interactions(const std::filesystem::path& path, DedupRule rule) {
    auto in = open_input(path);
    IdMap users;
    IdMap items;
    std::vector<Interaction> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() < 3 || toks.size() > 4) {
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'user item rating [timestamp]', got " +
                             std::to_string(toks.size()) + " fields");
        }
        Interaction e;
        e.user = users.intern(toks[0]);
        e.item = items.intern(toks[1]);
        e.rating = parse_real(toks[2], "rating", lineno);
        if (e.rating < kRatingMin || e.rating > kRatingMax) {
            throw RangeError("line " + std::to_string(lineno) + ": rating " + toks[2] +
                             " outside [0,5]");
        }
        if (toks.size() == 4) e.timestamp = parse_int(toks[3], "timestamp", lineno);
        entries.push_back(e);
    }
    return InteractionStore(std::move(users), std::move(items), std::move(entries), rule);
}

SocialGraph load_social(const std::filesystem::path& path, const IdMap* users) {
    auto in = open_input(path);
    IdMap nodes;
    if (users) {
        for (const auto& name : users->names()) nodes.intern(name);
    }
    std::vector<SocialEdge> edges;
    std::size_t self_loops = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() < 2 || toks.size() > 3) {
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'source target [weight]', got " +
                             std::to_string(toks.size()) + " fields");
        }
        SocialEdge e;
        e.source = nodes.intern(toks[0]);
        e.target = nodes.intern(toks[1]);
        e.weight = toks.size() == 3 ? parse_real(toks[2], "weight", lineno) : 1.0;
        if (e.weight < 0.0 || e.weight > 1.0) {
            throw RangeError("line " + std::to_string(lineno) + ": trust weight outside [0,1]");
        }
        if (e.source == e.target) {
            ++self_loops;
            continue;
        }
        edges.push_back(e);
    }
    return SocialGraph(std::move(nodes), std::move(edges), self_loops);
}

void save_features(const std::filesystem::path& path, const IdMap& nodes,
                   const FeatureMatrix& features) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    out.precision(17);
    for (std::size_t i = 0; i < features.row_count(); ++i) {
        out << nodes.name(static_cast<NodeIdx>(i));
        for (double v : features.row(i)) out << ' ' << v;
        out << '\n';
    }
}

std::pair<IdMap, FeatureMatrix> load_features(const std::filesystem::path& path) {
    auto in = open_input(path);
    IdMap nodes;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_line(line)) continue;
        auto toks = split_ws(line);
        if (toks.size() < 2) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'node v1 ... vd'");
        }
        nodes.intern(toks[0]);
        std::vector<double> row;
        row.reserve(toks.size() - 1);
        for (std::size_t k = 1; k < toks.size(); ++k) {
            row.push_back(parse_real(toks[k], "feature value", lineno));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(lineno) + ": inconsistent dimension");
        }
        rows.push_back(std::move(row));
    }
    FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto dst = m.row(i);
        std::copy(rows[i].begin(), rows[i].end(), dst.begin());
    }
    return {std::move(nodes), std::move(m)};
}

void save_interactions(const std::filesystem::path& path, const InteractionStore& store) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    out.precision(17);
    for (const auto& e : store.entries()) {
        out << store.users().name(e.user) << ' ' << store.items().name(e.item) << ' ' << e.rating;
        if (e.timestamp) out << ' ' << *e.timestamp;
        out << '\n';
    }
}

void save_id_map(const std::filesystem::path& path, const IdMap& ids) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << i << ' ' << ids.name(static_cast<NodeIdx>(i)) << '\n';
    }
}

}  // namespace cys
