#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "splitweave/ast.hpp"
#include "splitweave/render.hpp"
#include "splitweave/samplers.hpp"

namespace splitweave {

// ---------------------------------------------------------------------------
// Edit descriptors.

enum class EditKind { insert, remove, replace };

std::string_view edit_kind_name(EditKind kind);

/// Addresses the ordinal-th match in pre-order (layers in order; inside a
/// layer: fragmenter, merges, fragment ops, styles). `target` is "layer", a
/// family name (fragmenter, fragop, style) or a node kind name. With `param`
/// set the selector addresses that parameter of the matched node.
struct NodeSelector {
  std::string target;
  std::size_t ordinal = 0;
  std::optional<std::string> param;

  std::string str() const;
  bool operator==(const NodeSelector&) const = default;
};

struct EditDescriptor {
  EditKind kind = EditKind::replace;
  NodeSelector selector;
  std::optional<Subtree> payload;  // present iff kind != remove

  bool operator==(const EditDescriptor&) const = default;
};

// Single-line canonical form: (edit :kind K :target T :ordinal N [:param P] [:payload X]).
std::string print_edit(const EditDescriptor& e);
EditDescriptor parse_edit(std::string_view text);

// Path of the selected subtree, if the selector resolves in `p`.
std::optional<NodePath> select(const Program& p, const NodeSelector& s);

bool is_compatible(const Program& p, const EditDescriptor& e);
// Throws Error(incompatible_edit) naming the selector, or Error(invalid_result)
// when the edited program fails validation.
Program apply_edit(const Program& p, const EditDescriptor& e);

EditDescriptor sample_edit(Seed seed, StyleTag style, const MotifRegistry& motifs,
                           const SamplerConfig& cfg = default_sampler_config());

// ---------------------------------------------------------------------------
// Quartets.

struct Quartet {
  std::string id;
  Seed seed = 0;
  StyleTag style = StyleTag::mtp;
  EditDescriptor edit;
  Program a, a_prime, b, b_prime;
  PatternImage image_a, image_a_prime, image_b, image_b_prime;
};

struct QuartetOptions {
  std::optional<int> raster_size;
  int precision = 3;
};

// Total fragment count across layers.
std::size_t fragment_count(const Program& p, Seed seed);

// The four images are rendered with `seed`. Throws Error(sampling_exhausted)
// after 8 edit resamples.
Quartet make_quartet(Seed seed, StyleTag style, const MotifRegistry& motifs,
                     const SamplerConfig& cfg = default_sampler_config(), const QuartetOptions& opts = {});

// Renders a user-supplied (A, edit, B) triple the same way make_quartet does.
Quartet assemble_quartet(const Program& a, const EditDescriptor& e, const Program& b, Seed seed,
                         const MotifRegistry& motifs, const QuartetOptions& opts = {});

// ---------------------------------------------------------------------------
// Datasets.

struct ManifestRecord {
  std::string id;
  Seed seed = 0;
  StyleTag style = StyleTag::mtp;
  std::string edit;
  std::string a, a_prime, b, b_prime;  // paths relative to the dataset root
  std::string split;                   // "train" or "val"

  bool operator==(const ManifestRecord&) const = default;
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;  // sorted by id
  std::filesystem::path path;
};

struct DatasetOptions {
  std::size_t count = 1;
  std::vector<StyleTag> styles{StyleTag::mtp, StyleTag::sfp};
  Seed master_seed = 0;
  std::filesystem::path out_dir;
  unsigned workers = 1;
  std::optional<int> raster_size;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

std::string quartet_id(std::size_t index);
Seed quartet_seed(Seed master, std::size_t index);
// "val" iff FNV-1a(id) mod 100 < 5.
std::string split_for(const std::string& id);

std::string manifest_line(const ManifestRecord& r);
ManifestRecord parse_manifest_line(std::string_view line);

DatasetManifest write_dataset(const DatasetOptions& opts, const MotifRegistry& motifs,
                              const SamplerConfig& cfg = default_sampler_config());

// Checks a dataset directory: unique sorted ids, referenced files present,
// split rule, and the edit relation between the stored programs. Returns one
// message per problem.
std::vector<std::string> audit_dataset(const std::filesystem::path& dir);

}  // namespace splitweave
