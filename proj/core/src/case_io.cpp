#include "mixdeconv/case_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mixdeconv {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

long parse_count(const std::string& s, const std::string& path, long line) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) parse_fail(path, line, "trailing characters after count");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        parse_fail(path, line, "cannot parse count '" + s + "'");
    }
}

ProfileSeqs profile_from_json(const nlohmann::json& j, const std::string& context) {
    ProfileSeqs out;
    for (const auto& [locus, alleles] : j.items()) {
        if (!alleles.is_array() || alleles.size() != 2)
            throw ParseError(context + ": locus " + locus + " must map to exactly two alleles");
        out[locus] = {alleles[0].get<std::string>(), alleles[1].get<std::string>()};
    }
    return out;
}

nlohmann::json profile_to_json(const ProfileSeqs& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [locus, pair] : p) j[locus] = {pair.first, pair.second};
    return j;
}

}  // namespace

std::map<std::string, Locus> read_motif_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open motif table: " + path);
    std::map<std::string, Locus> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split_tabs(line);
        if (cols.size() != 3) parse_fail(path, line_no, "expected locus<TAB>motif<TAB>kappa");
        Locus locus;
        locus.name = cols[0];
        locus.primary_motif = cols[1];
        locus.num_motifs_kappa = static_cast<int>(parse_count(cols[2], path, line_no));
        if (!locus.valid()) parse_fail(path, line_no, "invalid locus definition");
        if (!out.emplace(locus.name, locus).second)
            parse_fail(path, line_no, "duplicate locus " + locus.name);
    }
    return out;
}

std::vector<LocusReadTable> read_reads_tsv(const std::string& path,
                                           const std::map<std::string, Locus>& motifs) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open reads file: " + path);
    std::vector<LocusReadTable> out;
    std::map<std::string, std::size_t> index;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split_tabs(line);
        if (cols.size() != 3) parse_fail(path, line_no, "expected locus<TAB>sequence<TAB>doc");
        const std::string& name = cols[0];
        if (!is_dna(cols[1]) || cols[1].empty())
            parse_fail(path, line_no, "sequence is not a nonempty ACGT string");
        const long doc = parse_count(cols[2], path, line_no);
        if (doc < 1) parse_fail(path, line_no, "doc must be >= 1");

        auto it = index.find(name);
        if (it == index.end()) {
            const auto mit = motifs.find(name);
            if (mit == motifs.end())
                parse_fail(path, line_no, "locus " + name + " missing from the motif table");
            index.emplace(name, out.size());
            out.push_back({mit->second, {}});
            it = index.find(name);
        }
        out[it->second].rows.push_back({cols[1], doc});
    }
    // duplicate sequences within a locus are a file error
    for (const auto& t : out) {
        std::map<std::string, int> seen;
        for (const auto& r : t.rows)
            if (++seen[r.sequence] > 1)
                throw ParseError(path + ": duplicate sequence at locus " + t.locus.name);
    }
    return out;
}

void write_reads_tsv(std::span<const LocusReadTable> tables, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write reads file: " + path);
    for (const auto& t : tables)
        for (const auto& r : t.rows) out << t.locus.name << '\t' << r.sequence << '\t' << r.doc << '\n';
}

void write_motif_table(std::span<const LocusReadTable> tables, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write motif table: " + path);
    for (const auto& t : tables)
        out << t.locus.name << '\t' << t.locus.primary_motif << '\t' << t.locus.num_motifs_kappa
            << '\n';
}

std::map<std::string, ProfileSeqs> read_profiles_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profiles file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::map<std::string, ProfileSeqs> out;
    for (const auto& [label, prof] : j.items()) out[label] = profile_from_json(prof, path);
    return out;
}

ProfileSeqs read_profile_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profile file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return profile_from_json(j, path);
}

LoadResult load_case(std::vector<LocusReadTable> reads, double catalog_threshold,
                     const std::vector<std::pair<std::string, ProfileSeqs>>& known_profiles,
                     const ProfileSeqs& poi_profile, int num_contributors) {
    if (!(catalog_threshold >= 0.0 && catalog_threshold < 1.0))
        throw ValidationError("catalog threshold must lie in [0, 1)");
    if (reads.empty()) throw ValidationError("case has no loci");

    LoadResult result;
    CaseData& cd = result.case_data;
    cd.num_contributors_k = num_contributors;

    auto locus_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t l = 0; l < reads.size(); ++l)
            if (reads[l].locus.name == name) return l;
        throw ValidationError("profile references locus " + name + " absent from the reads");
    };

    // asserted alleles per locus, with provenance for warnings
    std::vector<std::vector<std::pair<std::string, std::string>>> asserted(reads.size());
    for (const auto& [label, prof] : known_profiles)
        for (const auto& [locus, pair] : prof) {
            const std::size_t l = locus_index(locus);
            asserted[l].push_back({pair.first, label});
            asserted[l].push_back({pair.second, label});
        }
    for (const auto& [locus, pair] : poi_profile) {
        const std::size_t l = locus_index(locus);
        asserted[l].push_back({pair.first, "poi"});
        asserted[l].push_back({pair.second, "poi"});
    }

    cd.loci.resize(reads.size());
    for (std::size_t l = 0; l < reads.size(); ++l) {
        LocusData& ld = cd.loci[l];
        ld.reads = std::move(reads[l]);
        ld.catalog.locus = ld.reads.locus;

        const double total = static_cast<double>(ld.reads.total_doc());
        const double cutoff = catalog_threshold * total;
        std::map<std::string, std::int64_t> doc_of;
        for (const auto& r : ld.reads.rows) doc_of[r.sequence] = r.doc;

        std::map<std::string, std::int64_t> chosen;
        for (const auto& r : ld.reads.rows)
            if (static_cast<double>(r.doc) >= cutoff) chosen[r.sequence] = r.doc;
        for (const auto& [seq, who] : asserted[l]) {
            const auto it = doc_of.find(seq);
            const std::int64_t doc = it == doc_of.end() ? 0 : it->second;
            if (static_cast<double>(doc) < cutoff)
                result.warnings.push_back("allele of '" + who + "' at locus " +
                                          ld.reads.locus.name + " has doc " +
                                          std::to_string(doc) + ", below the catalog threshold");
            chosen.emplace(seq, doc);
        }

        std::vector<std::pair<std::string, std::int64_t>> ordered(chosen.begin(), chosen.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (auto& [seq, doc] : ordered) ld.catalog.alleles.push_back(seq);
    }

    auto to_genotypes = [&](const ProfileSeqs& prof, const std::string& who) {
        std::vector<Genotype> out(cd.loci.size());
        for (std::size_t l = 0; l < cd.loci.size(); ++l) {
            const auto it = prof.find(cd.loci[l].reads.locus.name);
            if (it == prof.end())
                throw ValidationError("profile '" + who + "' missing locus " +
                                      cd.loci[l].reads.locus.name);
            const auto a = cd.loci[l].catalog.index_of(it->second.first);
            const auto b = cd.loci[l].catalog.index_of(it->second.second);
            if (!a || !b)
                throw ValidationError("internal: asserted allele missing from catalog at locus " +
                                      cd.loci[l].reads.locus.name);
            out[l] = Genotype(*a, *b);
        }
        return out;
    };

    for (const auto& [label, prof] : known_profiles)
        cd.known_profiles.emplace_back(label, to_genotypes(prof, label));
    cd.poi_profile = to_genotypes(poi_profile, "poi");

    if (cd.num_contributors_k < 1 + cd.num_known())
        throw ValidationError("num_contributors must be at least 1 + number of known profiles");
    return result;
}

LoadResult load_case_file(const std::string& case_json_path) {
    std::ifstream in(case_json_path);
    if (!in) throw ParseError("cannot open case file: " + case_json_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(case_json_path + ": " + e.what());
    }

    const auto dir = std::filesystem::path(case_json_path).parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (dir / fp).string();
    };

    try {
        const std::string reads_path = resolve(j.at("reads").get<std::string>());
        const std::string motifs_path = resolve(j.at("motifs").get<std::string>());
        const double threshold = j.value("catalog_threshold", 0.0025);
        const int k = j.at("k").get<int>();

        const auto motifs = read_motif_table(motifs_path);
        auto reads = read_reads_tsv(reads_path, motifs);

        std::vector<std::pair<std::string, ProfileSeqs>> knowns;
        if (j.contains("known_profiles"))
            for (const auto& [label, prof] : j["known_profiles"].items())
                knowns.emplace_back(label, profile_from_json(prof, case_json_path));
        const ProfileSeqs poi = profile_from_json(j.at("poi_profile"), case_json_path);
        return load_case(std::move(reads), threshold, knowns, poi, k);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(case_json_path + ": " + e.what());
    }
}

void write_case_json(const std::string& path, const std::string& reads_file,
                     const std::string& motifs_file, double threshold, int k,
                     const std::vector<std::pair<std::string, ProfileSeqs>>& known_profiles,
                     const ProfileSeqs& poi_profile) {
    nlohmann::json j;
    j["reads"] = reads_file;
    j["motifs"] = motifs_file;
    j["catalog_threshold"] = threshold;
    j["k"] = k;
    nlohmann::json knowns = nlohmann::json::object();
    for (const auto& [label, prof] : known_profiles) knowns[label] = profile_to_json(prof);
    j["known_profiles"] = knowns;
    j["poi_profile"] = profile_to_json(poi_profile);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write case file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace mixdeconv
