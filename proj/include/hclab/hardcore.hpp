#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hclab/distribution.hpp"
#include "hclab/graph.hpp"
#include "hclab/rational.hpp"
#include "hclab/report.hpp"

namespace hclab {

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kEnumerationCap = 40;
constexpr std::size_t kExactRationalCap = 24;
constexpr std::size_t kSliceCap = 20;

// Occupancy bitset over the vertices of a graph.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}
  static Configuration from_mask(std::size_t n, std::uint64_t mask);
  // '0'/'1' characters, vertex 0 first.
  static Configuration from_bits(std::string_view bits);

  std::size_t size() const { return n_; }
  bool test(Vertex v) const { return words_[v >> 6] >> (v & 63) & 1; }
  void set(Vertex v, bool on = true);
  std::size_t count() const;
  std::uint64_t mask() const;
  std::string to_bits() const;
  bool operator==(const Configuration&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

bool is_independent(const BipartiteGraph& g, const Configuration& s);
bool is_independent_mask(const BipartiteGraph& g, std::uint64_t mask);

struct FugacityParams {
  double lambda = 1.0;
  double log_lambda = 0.0;
  double lambda_tilde = 0.0;  // log(1 + lambda)
  std::optional<Rational> exact;

  static FugacityParams from_double(double lambda);
  static FugacityParams from_rational(const Rational& lambda);
  // "1/2", "2", "0.5": decimal and fraction strings keep an exact value.
  static FugacityParams parse(std::string_view text);
  std::string label() const;
};

// Depth-first enumeration of the independent sets of g in lexicographic
// order of the occupation string (vertex 0 decided first, vacant before
// occupied). Throws CapExceeded when |V| > cap.
void for_each_config(const BipartiteGraph& g, const std::function<void(std::uint64_t)>& fn,
                     std::size_t cap = kEnumerationCap);
std::vector<std::uint64_t> enumerate_configs(const BipartiteGraph& g,
                                             std::size_t cap = kEnumerationCap);

// Number of independent sets of each size.
std::vector<std::uint64_t> independence_polynomial(const BipartiteGraph& g,
                                                   std::size_t cap = kEnumerationCap);

// All of Omega for a small graph, kept in memory for repeated scans.
struct ConfigSpace {
  BipartiteGraph graph;
  std::vector<std::uint64_t> configs;

  static ConfigSpace build(const BipartiteGraph& g, std::size_t cap = kEnumerationCap);
  std::vector<std::uint64_t> size_counts() const;
  // lambda^k for k = 0..|V|
  static std::vector<double> powers(double lambda, std::size_t n);
};

struct PartitionResult {
  double log_z = 0.0;
  std::string method;
  std::optional<Rational> exact;
  Json to_json() const;
};

PartitionResult partition_from_polynomial(const std::vector<std::uint64_t>& counts,
                                          const FugacityParams& lambda, bool want_exact);
PartitionResult partition_bruteforce(const BipartiteGraph& g, const FugacityParams& lambda,
                                     std::size_t cap = kEnumerationCap);

struct TransferMatrix {
  std::vector<std::uint64_t> states;  // independent sets of the slice torus
  Eigen::MatrixXd matrix;
};

TransferMatrix build_transfer_matrix(const TorusSpec& spec, double lambda,
                                     std::size_t slice_cap = kSliceCap);
// Z = trace(M^L) along `axis`. All axes are equivalent on a torus; the axis
// is validated and recorded.
PartitionResult partition_transfer_torus(const TorusSpec& spec, const FugacityParams& lambda,
                                         int axis = 0, std::size_t slice_cap = kSliceCap);
// log trace(M^k) for a nonnegative square matrix, with rescaling.
double log_trace_power(const Eigen::MatrixXd& m, unsigned k);

FiniteDistribution exact_distribution(const BipartiteGraph& g, const FugacityParams& lambda,
                                      std::size_t cap = kEnumerationCap);
double expectation(const BipartiteGraph& g, const FugacityParams& lambda,
                   const std::function<double(std::uint64_t)>& obs,
                   std::size_t cap = kEnumerationCap);

// Heat-bath single-site dynamics.
class GlauberChain {
 public:
  GlauberChain(const BipartiteGraph& g, double lambda, std::uint64_t seed);
  GlauberChain(const BipartiteGraph& g, double lambda, std::uint64_t seed, Configuration start);
  // Keeps a pointer to g.
  GlauberChain(BipartiteGraph&&, double, std::uint64_t) = delete;
  void step();
  void run(std::uint64_t steps);
  const Configuration& state() const { return state_; }
  std::size_t occupied() const { return occupied_; }

 private:
  void set_site(Vertex v, bool on);

  const BipartiteGraph* g_;
  double p_occ_;
  std::mt19937_64 rng_;
  Configuration state_;
  std::vector<std::uint32_t> blocked_;
  std::size_t occupied_ = 0;
};

Configuration glauber_run(const BipartiteGraph& g, double lambda, std::uint64_t steps,
                          std::uint64_t seed);

// Exact one-step transition probability of the heat-bath chain (masks, |V| <= 64).
Rational glauber_transition(const BipartiteGraph& g, const Rational& lambda, std::uint64_t from,
                            std::uint64_t to);

struct FixedSizeSample {
  Configuration config;
  bool uniform_start = false;          // start drawn uniformly from an enumeration
  std::optional<bool> irreducible;     // relocation moves connect Omega_N (desk scale only)
  std::size_t class_size = 0;          // |Omega_N| when enumerated
};

// Uniform independent set of size N via relocation moves. At desk scale the
// start is drawn uniformly from the enumerated Omega_N; since the move kernel
// is symmetric the law stays uniform even when the moves are reducible.
FixedSizeSample sample_fixed_size(const BipartiteGraph& g, std::size_t N, std::uint64_t steps,
                                  std::uint64_t seed, std::size_t cap = kEnumerationCap);

// Whether relocation moves connect all independent sets of size N.
bool relocation_irreducible(const BipartiteGraph& g, const std::vector<std::uint64_t>& omega_n);

CheckReport trivial_lower_bound_check(const BipartiteGraph& g, const FugacityParams& lambda,
                                      std::size_t cap = kEnumerationCap);

}  // namespace hclab
