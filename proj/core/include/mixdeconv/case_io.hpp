#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mixdeconv/dna.hpp"

namespace mixdeconv {

/// Input file failed to parse; message carries path and line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inputs parsed but are inconsistent with each other.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two allele strings per locus, keyed by locus name.
using ProfileSeqs = std::map<std::string, std::pair<std::string, std::string>>;

/// Motif table: locus <TAB> motif <TAB> kappa.
std::map<std::string, Locus> read_motif_table(const std::string& path);

/// Reads file: locus <TAB> sequence <TAB> doc, one row per unique sequence.
/// Loci are looked up in the motif table; an unknown locus is an error.
std::vector<LocusReadTable> read_reads_tsv(const std::string& path,
                                           const std::map<std::string, Locus>& motifs);

void write_reads_tsv(std::span<const LocusReadTable> tables, const std::string& path);
void write_motif_table(std::span<const LocusReadTable> tables, const std::string& path);

/// Profiles JSON: {"label": {"LOCUS": ["seq1", "seq2"], ...}, ...}.
std::map<std::string, ProfileSeqs> read_profiles_json(const std::string& path);
/// Single profile JSON: {"LOCUS": ["seq1", "seq2"], ...}.
ProfileSeqs read_profile_json(const std::string& path);

struct LoadResult {
    CaseData case_data;
    std::vector<std::string> warnings;
};

/// Assembles a case from parsed inputs. The catalog at each locus holds the
/// observed sequences with doc >= threshold * total doc plus every known /
/// POI allele (added by assertion, with a warning when one sits below the
/// threshold). Known-profile loci must exist in the reads.
LoadResult load_case(std::vector<LocusReadTable> reads, double catalog_threshold,
                     const std::vector<std::pair<std::string, ProfileSeqs>>& known_profiles,
                     const ProfileSeqs& poi_profile, int num_contributors);

/// Loads a whole case from a case.json wrapper: reads/motif paths (relative
/// to the json file), threshold, k, inline known profiles and POI profile.
LoadResult load_case_file(const std::string& case_json_path);

/// Writes the wrapper next to reads/motif files produced by the simulator.
void write_case_json(const std::string& path, const std::string& reads_file,
                     const std::string& motifs_file, double threshold, int k,
                     const std::vector<std::pair<std::string, ProfileSeqs>>& known_profiles,
                     const ProfileSeqs& poi_profile);

}  // namespace mixdeconv
