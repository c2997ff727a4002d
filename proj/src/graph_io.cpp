#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "katzup/error.hpp"
#include "katzup/graph.hpp"

namespace katzup {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i)
            tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

bool parse_int(std::string_view tok, long long &out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

} // namespace

LoadReport load_edge_list(std::istream &in, bool one_based, std::size_t node_count) {
    std::vector<Edge> edges;
    long long max_index = -1;
    const long long base = one_based ? 1 : 0;
    std::string line;
    std::size_t line_no = 0;
    std::size_t declared = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            auto note = split_ws(view.substr(hash + 1));
            long long count = 0;
            if (note.size() >= 2 && note[0] == "nodes" && parse_int(note[1], count) && count > 0)
                declared = std::max(declared, static_cast<std::size_t>(count));
            view = view.substr(0, hash);
        }
        auto tokens = split_ws(view);
        if (tokens.empty())
            continue;
        long long a = 0, b = 0;
        if (tokens.size() != 2 || !parse_int(tokens[0], a) || !parse_int(tokens[1], b))
            fail(ErrorCode::MalformedLine, where(line_no) + "expected two integer node ids");
        a -= base;
        b -= base;
        if (a < 0 || b < 0)
            fail(ErrorCode::IndexOutOfRange, where(line_no) + "node id below " +
                                                 std::to_string(base));
        if (node_count > 0 && (a >= static_cast<long long>(node_count) ||
                               b >= static_cast<long long>(node_count)))
            fail(ErrorCode::IndexOutOfRange, where(line_no) + "node id exceeds declared count " +
                                                 std::to_string(node_count));
        if (a > std::numeric_limits<NodeId>::max() - 1 || b > std::numeric_limits<NodeId>::max() - 1)
            fail(ErrorCode::IndexOutOfRange, where(line_no) + "node id too large");
        if (a == b)
            fail(ErrorCode::SelfLoop, where(line_no) + "self-loop at node " + std::to_string(a + base));
        max_index = std::max({max_index, a, b});
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    if (in.bad())
        fail(ErrorCode::Io, "read error in edge list");
    std::size_t n = node_count > 0
                        ? node_count
                        : std::max(declared, static_cast<std::size_t>(max_index + 1));
    LoadReport report;
    report.graph = Graph::from_edges(n, edges, &report.merged);
    return report;
}

LoadReport load_matrix_market(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        fail(ErrorCode::UnsupportedHeader, "empty Matrix Market stream");
    ++line_no;
    auto header = split_ws(line);
    if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix" ||
        lower(header[2]) != "coordinate")
        fail(ErrorCode::UnsupportedHeader, "expected '%%MatrixMarket matrix coordinate ...'");
    const std::string field = lower(header[3]);
    const std::string symmetry = lower(header[4]);
    if (field != "pattern" && field != "real" && field != "integer")
        fail(ErrorCode::UnsupportedHeader, "unsupported field '" + field + "'");
    if (symmetry != "symmetric")
        fail(ErrorCode::UnsupportedHeader, "unsupported symmetry '" + symmetry + "'");
    const std::size_t entry_tokens = field == "pattern" ? 2 : 3;

    long long rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%')
            continue;
        auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        if (tokens.size() != 3 || !parse_int(tokens[0], rows) || !parse_int(tokens[1], cols) ||
            !parse_int(tokens[2], nnz) || rows < 0 || nnz < 0)
            fail(ErrorCode::MalformedEntry, where(line_no) + "bad size line");
        break;
    }
    if (rows < 0)
        fail(ErrorCode::MalformedEntry, "missing size line");
    if (rows != cols)
        fail(ErrorCode::UnsupportedHeader, "adjacency matrix must be square");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(nnz));
    long long seen = 0;
    while (seen < nnz && std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%')
            continue;
        auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        long long i = 0, j = 0;
        if (tokens.size() != entry_tokens || !parse_int(tokens[0], i) || !parse_int(tokens[1], j))
            fail(ErrorCode::MalformedEntry, where(line_no) + "bad coordinate entry");
        if (i < 1 || j < 1 || i > rows || j > rows)
            fail(ErrorCode::MalformedEntry, where(line_no) + "coordinate outside matrix");
        if (i == j)
            fail(ErrorCode::SelfLoop, where(line_no) + "diagonal entry at " + std::to_string(i));
        edges.emplace_back(static_cast<NodeId>(i - 1), static_cast<NodeId>(j - 1));
        ++seen;
    }
    if (seen < nnz)
        fail(ErrorCode::MalformedEntry, "expected " + std::to_string(nnz) + " entries, found " +
                                            std::to_string(seen));
    LoadReport report;
    report.graph = Graph::from_edges(static_cast<std::size_t>(rows), edges, &report.merged);
    return report;
}

LoadReport load_graph_file(const std::string &path, bool one_based) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    const bool mtx = path.size() >= 4 && lower(path.substr(path.size() - 4)) == ".mtx";
    return mtx ? load_matrix_market(in) : load_edge_list(in, one_based);
}

void write_edge_list(std::ostream &out, const Graph &g, bool one_based) {
    const NodeId base = one_based ? 1 : 0;
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (const Edge &e : g.edges())
        out << e.u + base << ' ' << e.v + base << '\n';
}

} // namespace katzup
