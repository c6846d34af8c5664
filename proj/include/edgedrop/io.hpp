#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "edgedrop/graph.hpp"
#include "edgedrop/signal_model.hpp"

namespace edgedrop {

/// Graph file format: {"n": N, "edges": [[i, j, w], ...]}. The loader
/// revalidates all graph invariants.
WeightedGraph load_graph_json(const std::string& path);
void save_graph_json(const WeightedGraph& g, const std::string& path);

/// Batches are CSV matrices, one row per vertex and one column per sample.
SignalBatch load_batch_csv(const std::string& path);
void save_batch_csv(const SignalBatch& batch, const std::string& path);

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

/// Round-trip decimal rendering ("%.17g"); the single formatter behind every
/// CSV so reruns are byte-identical.
std::string format_double(double x);

/// FNV-1a 64-bit; used for config hashes embedded in run manifests.
std::uint64_t fnv1a_hash(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace edgedrop
