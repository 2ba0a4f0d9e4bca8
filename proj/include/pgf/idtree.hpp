#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgf/catalog.hpp"
#include "pgf/group.hpp"

namespace pgf {

/// Pipeline step: 1..9, with `power` set for the cluster refinement steps (step 7).
struct StepLabel {
    int step = 1;
    std::uint32_t power = 0;

    std::string to_string() const;  ///< "4", "7:2"
    static StepLabel parse(std::string_view text);
    bool operator==(const StepLabel&) const = default;
};

struct InvariantValue {
    StepLabel step;
    std::vector<long long> payload;

    /// Comma-separated payload, "-" when empty. Used as the exact child key.
    std::string key() const;
    bool operator==(const InvariantValue&) const = default;
};

/// Clusters are unions of conjugacy classes (classes as in PcGroup::classes()).
struct ClusterPartition {
    struct Cluster {
        std::vector<std::uint32_t> classes;  ///< ascending class indices
        std::uint32_t size = 0;              ///< number of elements
        std::uint32_t class_length = 0;
        std::uint32_t element_order = 0;
    };
    /// Ordered by canonical label.
    std::vector<Cluster> clusters;
    /// Map i -> j with C_i^r = C_j for the last refinement power, -1 when C_i^r is no cluster.
    std::vector<int> cluster_map;
    std::uint32_t power = 0;

    /// (size, l, o, image) per cluster in label order.
    std::vector<long long> payload() const;
};

/// Initial (l, o)-clusters.
ClusterPartition cluster_partition(const GroupPtr& G);
/// Splits by r-th power images and preimages until stable, then records the cluster map.
ClusterPartition refine_by_power(const GroupPtr& G, const ClusterPartition& part, std::uint32_t r);

/// Cycle type of i -> j with C_i^3 in C_j, descending. Throws InvalidInput unless p = 2.
std::vector<std::uint32_t> cube_map_cycle_type(const GroupPtr& G);

/// Step 7 uses the cumulative refinement through `schedule` up to the labelled power.
InvariantValue invariant_step(const GroupPtr& G, const StepLabel& step,
                              const std::vector<std::uint32_t>& schedule = {});

/// r in {p, p^2, .., p^(n-1)} then {2, 3, 5} without p.
std::vector<std::uint32_t> default_power_schedule(int p, int n);
/// Steps in pipeline order for groups of order p^n.
std::vector<StepLabel> pipeline(int p, int n);

struct TreeNode {
    /// Internal nodes: splitting step and children sorted by payload key.
    std::optional<StepLabel> step;
    std::vector<std::pair<std::string, std::uint32_t>> children;
    /// Leaves: catalog indices; more than one means resolve by isomorphism.
    std::vector<std::uint32_t> candidates;
};

struct DecisionTree {
    int p = 2;
    int n = 0;
    std::vector<std::uint32_t> schedule;
    std::uint64_t catalog_checksum = 0;
    std::uint32_t catalog_count = 0;
    std::vector<TreeNode> nodes;  ///< node 0 is the root
    /// Presentations of the members of multi-candidate leaves, by catalog index.
    std::vector<std::pair<std::uint32_t, PcPresentation>> resolvers;

    std::uint32_t order() const;
    std::size_t leaf_count() const;
    std::size_t max_leaf_size() const;
};

struct TreeBuildOptions {
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// FNV-1a of the catalog file text.
std::uint64_t catalog_checksum(int p, int n, const std::vector<CatalogEntry>& entries);

DecisionTree build_tree(int p, int n, const std::vector<CatalogEntry>& entries, const TreeBuildOptions& opts = {});

struct IdentifyOptions {
    int random_budget = 20;
    std::uint64_t seed = 1;
};

struct IdentifyResult {
    std::uint32_t index = 0;
    std::vector<StepLabel> path;  ///< steps evaluated
    bool resolved_by_isomorphism = false;
};

/// Throws IntegrityError when G fits no branch or no candidate.
IdentifyResult identify(const DecisionTree& tree, const GroupPtr& G, const IdentifyOptions& opts = {});

std::string serialize_tree(const DecisionTree& tree);
/// Throws InvalidInput (with byte offset) for malformed or truncated text and
/// IntegrityError for checksum or partition failures.
DecisionTree parse_tree(std::string_view text);
void save_tree(const DecisionTree& tree, const std::filesystem::path& path);
DecisionTree load_tree(const std::filesystem::path& path);
/// IntegrityError unless the tree was built from this catalog.
void check_tree_catalog(const DecisionTree& tree, int p, int n, const std::vector<CatalogEntry>& entries);

}  // namespace pgf
