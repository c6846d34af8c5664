#include "edgedrop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace edgedrop {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

WeightedGraph load_graph_json(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& err) {
        throw std::runtime_error("bad graph file " + path + ": " + err.what());
    }
    if (!doc.contains("n") || !doc.contains("edges"))
        throw std::runtime_error("graph file needs fields 'n' and 'edges'");
    const int n = doc.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& row : doc.at("edges")) {
        if (!row.is_array() || row.size() != 3)
            throw std::runtime_error("each edge must be [i, j, w]");
        edges.push_back(
            {row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    return WeightedGraph::build(n, std::move(edges));
}

void save_graph_json(const WeightedGraph& g, const std::string& path) {
    json doc;
    doc["n"] = g.n_vertices();
    auto& rows = doc["edges"] = json::array();
    for (const auto& e : g.edges()) rows.push_back({e.i, e.j, e.w});
    write_text_file(path, doc.dump(2) + "\n");
}

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
    std::ostringstream out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

void save_batch_csv(const SignalBatch& batch, const std::string& path) {
    save_matrix_csv(batch.samples, path);
}

SignalBatch load_batch_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ','))
            row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty batch file " + path);
    SignalBatch batch;
    batch.samples.resize(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            batch.samples(r, c) = rows[r][c];
    return batch;
}

}  // namespace edgedrop
