/*
 * Copyright (c) 2026, the swnprior authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SWNPRIOR_GOLD_HPP
#define SWNPRIOR_GOLD_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/lexicon.hpp"
#include "swnprior/text.hpp"

namespace swnprior {

enum class GoldKind { anew, gi };

inline const char* to_string(GoldKind k) { return k == GoldKind::anew ? "anew" : "gi"; }

inline std::optional<GoldKind> gold_kind_from_string(std::string_view s) {
    const std::string t = text::to_lower(s);
    if (t == "anew") return GoldKind::anew;
    if (t == "gi" || t == "inquirer") return GoldKind::gi;
    return std::nullopt;
}

/// One valence-norm row, still on the raw 1-9 rating scale.
struct AnewRecord {
    std::string word;
    double valence_mean = 0.0;
    double valence_sd = 0.0;
    std::optional<double> valence_mean_male;
    std::optional<double> valence_mean_female;
};

enum class GiPosTag { modif, noun, verb, other };

inline const char* to_string(GiPosTag t) {
    switch (t) {
        case GiPosTag::modif: return "modif";
        case GiPosTag::noun: return "noun";
        case GiPosTag::verb: return "verb";
        case GiPosTag::other: return "other";
    }
    return "?";
}

/// One binary-polarity dictionary row; entry may carry a #n sense suffix.
struct GiRecord {
    std::string entry;
    int label = 0; ///< +1 positive, -1 negative
    GiPosTag pos_tag = GiPosTag::other;
};

struct SubgroupInfo {
    Pos pos_class = Pos::adjective;
    std::optional<double> male_target;   ///< rescaled to [-1,1]
    std::optional<double> female_target; ///< rescaled to [-1,1]
};

/// An aligned lemma#PoS gold record. Regression rows carry target_real,
/// classification rows target_class; at least one is always present.
struct GoldInstance {
    std::string lemma;
    Pos pos = Pos::adjective;
    std::optional<double> target_real; ///< rescaled to [-1,1]
    std::optional<int> target_class;   ///< +1 / -1
    SubgroupInfo subgroup;

    friend bool operator==(const GoldInstance&, const GoldInstance&) = default;
};

struct GoldParseSummary {
    std::size_t total_lines = 0;
    std::size_t data_rows = 0;
    std::size_t records = 0;
    std::size_t skipped_rows = 0;       ///< missing/invalid required fields
    std::size_t inconsistent_rows = 0;  ///< GI rows tagged both positive and negative
    std::size_t unlabeled_rows = 0;     ///< GI rows in neither category
    std::vector<std::string> issues;
};

/// Word-level and instance-level accounting for one alignment run.
/// Word level:     words_in == aligned_words + unaligned_words + sense_suffixed.
/// Instance level: expanded_instances == kept_instances + all_zero_filtered.
struct AlignmentReport {
    GoldKind kind = GoldKind::anew;
    std::size_t words_in = 0;
    std::size_t aligned_words = 0;
    std::size_t unaligned_words = 0;
    std::size_t sense_suffixed = 0; ///< GI only; 0 for valence corpora
    std::size_t lemma_map_hits = 0;
    std::size_t expanded_instances = 0;
    std::size_t kept_instances = 0;
    std::size_t all_zero_filtered = 0;
};

struct AlignedGold {
    std::vector<GoldInstance> instances;
    AlignmentReport report;
};

/// Maps the 1-9 rating scale onto [-1,1] linearly: 5 -> 0, 1 -> -1, 9 -> +1.
inline double rescale_valence(double v) {
    if (!(v >= 1.0 && v <= 9.0)) throw DomainError("valence rating outside the 1-9 scale");
    return (v - 5.0) / 4.0;
}

namespace detail {

/// Splits one delimiter-separated line, honoring double-quoted fields.
inline std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.emplace_back(text::trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.emplace_back(text::trim(cur));
    return out;
}

inline char detect_delimiter(std::string_view header) {
    return header.find('\t') != std::string_view::npos ? '\t' : ',';
}

inline std::string strip_bom(std::string line) {
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
        return line.substr(3);
    }
    return line;
}

inline bool has_token(const std::vector<std::string>& tokens, std::string_view t) {
    for (const auto& tok : tokens) {
        if (tok == t) return true;
    }
    return false;
}

/// Column classification for valence-norm headers. Handles the common
/// spellings: "Valence Mean", "ValMn", "V.Mean.Sum", "ValMn_M", ...
struct AnewColumns {
    int word = -1;
    int mean = -1;
    int sd = -1;
    int mean_male = -1;
    int mean_female = -1;
};

inline AnewColumns classify_anew_header(const std::vector<std::string>& raw) {
    AnewColumns cols;
    for (int i = 0; i < static_cast<int>(raw.size()); ++i) {
        const std::string norm = text::normalize_header(raw[i]);
        const auto toks = text::split_whitespace(norm);
        const bool wordish = norm == "word" || norm == "description" ||
                             (norm.find("word") != std::string::npos &&
                              norm.find("no") == std::string::npos &&
                              norm.find("num") == std::string::npos);
        if (wordish && cols.word < 0) {
            cols.word = i;
            continue;
        }
        const bool valence_ish =
            norm.find("val") != std::string::npos || (!toks.empty() && toks[0] == "v");
        if (!valence_ish) continue;
        const bool is_sd = norm.find("sd") != std::string::npos;
        const bool is_mean =
            norm.find("mean") != std::string::npos || norm.find("mn") != std::string::npos;
        const bool male = has_token(toks, "m") || has_token(toks, "male");
        const bool female = has_token(toks, "f") || has_token(toks, "fem") ||
                            has_token(toks, "female");
        if (is_sd) {
            if (cols.sd < 0 && !male && !female) cols.sd = i;
        } else if (is_mean) {
            if (male && cols.mean_male < 0) {
                cols.mean_male = i;
            } else if (female && cols.mean_female < 0) {
                cols.mean_female = i;
            } else if (!male && !female && cols.mean < 0) {
                cols.mean = i;
            }
        }
    }
    return cols;
}

inline std::optional<double> field_double(const std::vector<std::string>& fields, int idx) {
    if (idx < 0 || idx >= static_cast<int>(fields.size())) return std::nullopt;
    return text::parse_double(fields[idx]);
}

} // namespace detail

/// Parses a delimiter-separated valence-norm file. The first non-empty line
/// must be a header naming at least a word column and an overall
/// valence-mean column; rows with missing or out-of-range required fields
/// are skipped and counted.
inline std::vector<AnewRecord> parse_anew(std::istream& in, GoldParseSummary* summary = nullptr) {
    if (!in) throw IoError("cannot read valence-norm stream");
    GoldParseSummary local;
    GoldParseSummary& sum = summary ? *summary : local;

    std::string line;
    bool have_header = false;
    char delim = ',';
    detail::AnewColumns cols;
    std::vector<AnewRecord> records;

    bool first = true;
    while (std::getline(in, line)) {
        ++sum.total_lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            line = detail::strip_bom(line);
            first = false;
        }
        if (text::trim(line).empty()) continue;

        if (!have_header) {
            delim = detail::detect_delimiter(line);
            cols = detail::classify_anew_header(detail::split_fields(line, delim));
            if (cols.word < 0 || cols.mean < 0) {
                throw FormatError(
                    "valence-norm file: first line is not a header naming word and "
                    "valence-mean columns");
            }
            have_header = true;
            continue;
        }

        ++sum.data_rows;
        const auto fields = detail::split_fields(line, delim);
        AnewRecord rec;
        if (cols.word >= static_cast<int>(fields.size()) || fields[cols.word].empty()) {
            ++sum.skipped_rows;
            sum.issues.push_back("row " + std::to_string(sum.total_lines) + ": missing word");
            continue;
        }
        rec.word = fields[cols.word];
        const auto mean = detail::field_double(fields, cols.mean);
        if (!mean || !(*mean >= 1.0 && *mean <= 9.0)) {
            ++sum.skipped_rows;
            sum.issues.push_back("row " + std::to_string(sum.total_lines) +
                                 ": missing or out-of-range valence mean");
            continue;
        }
        rec.valence_mean = *mean;
        if (const auto sd = detail::field_double(fields, cols.sd); sd && *sd >= 0.0) {
            rec.valence_sd = *sd;
        }
        if (const auto m = detail::field_double(fields, cols.mean_male);
            m && *m >= 1.0 && *m <= 9.0) {
            rec.valence_mean_male = *m;
        }
        if (const auto f = detail::field_double(fields, cols.mean_female);
            f && *f >= 1.0 && *f <= 9.0) {
            rec.valence_mean_female = *f;
        }
        records.push_back(std::move(rec));
        ++sum.records;
    }
    if (!have_header) throw FormatError("valence-norm file: empty (no header line)");
    return records;
}

namespace detail {

struct GiColumns {
    int entry = -1;
    int positiv = -1;
    int negativ = -1;
    std::vector<int> pos_bearing; ///< columns scanned for modif/noun/verb tags
};

inline GiColumns classify_gi_header(const std::vector<std::string>& raw) {
    GiColumns cols;
    for (int i = 0; i < static_cast<int>(raw.size()); ++i) {
        const std::string norm = text::normalize_header(raw[i]);
        if (norm == "entry" || norm == "word") {
            if (cols.entry < 0) cols.entry = i;
        } else if (norm == "positiv" || norm == "positive") {
            if (cols.positiv < 0) cols.positiv = i;
        } else if (norm == "negativ" || norm == "negative") {
            if (cols.negativ < 0) cols.negativ = i;
        } else if (norm.find("othtags") != std::string::npos ||
                   norm == "pos" || norm.find("pos tag") != std::string::npos ||
                   norm.find("part of speech") != std::string::npos) {
            cols.pos_bearing.push_back(i);
        }
    }
    return cols;
}

inline GiPosTag classify_gi_pos(const std::vector<std::string>& fields,
                                const std::vector<int>& pos_cols) {
    for (int idx : pos_cols) {
        if (idx >= static_cast<int>(fields.size())) continue;
        const std::string norm = text::normalize_header(fields[idx]);
        for (const auto& tok : text::split_whitespace(norm)) {
            if (tok == "modif") return GiPosTag::modif;
            if (tok == "noun") return GiPosTag::noun;
            if (tok == "supv" || tok == "verb") return GiPosTag::verb;
        }
    }
    return GiPosTag::other;
}

} // namespace detail

/// Parses a delimiter-separated binary-polarity dictionary. Only rows in the
/// positive or negative category become records; rows tagged with both are
/// rejected as inconsistent and counted.
inline std::vector<GiRecord> parse_gi(std::istream& in, GoldParseSummary* summary = nullptr) {
    if (!in) throw IoError("cannot read polarity-dictionary stream");
    GoldParseSummary local;
    GoldParseSummary& sum = summary ? *summary : local;

    std::string line;
    bool have_header = false;
    char delim = '\t';
    detail::GiColumns cols;
    std::vector<GiRecord> records;

    bool first = true;
    while (std::getline(in, line)) {
        ++sum.total_lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            line = detail::strip_bom(line);
            first = false;
        }
        if (text::trim(line).empty()) continue;

        if (!have_header) {
            delim = detail::detect_delimiter(line);
            cols = detail::classify_gi_header(detail::split_fields(line, delim));
            if (cols.entry < 0) {
                throw FormatError("polarity dictionary: header has no entry column");
            }
            if (cols.positiv < 0 || cols.negativ < 0) {
                throw FormatError(
                    "polarity dictionary: header has no positive/negative category columns");
            }
            have_header = true;
            continue;
        }

        ++sum.data_rows;
        const auto fields = detail::split_fields(line, delim);
        if (cols.entry >= static_cast<int>(fields.size()) || fields[cols.entry].empty()) {
            ++sum.skipped_rows;
            sum.issues.push_back("row " + std::to_string(sum.total_lines) + ": missing entry");
            continue;
        }
        const bool pos_set = cols.positiv < static_cast<int>(fields.size()) &&
                             !fields[cols.positiv].empty();
        const bool neg_set = cols.negativ < static_cast<int>(fields.size()) &&
                             !fields[cols.negativ].empty();
        if (pos_set && neg_set) {
            ++sum.inconsistent_rows;
            sum.issues.push_back("row " + std::to_string(sum.total_lines) +
                                 ": tagged both positive and negative");
            continue;
        }
        if (!pos_set && !neg_set) {
            ++sum.unlabeled_rows;
            continue;
        }
        GiRecord rec;
        rec.entry = fields[cols.entry];
        rec.label = pos_set ? +1 : -1;
        rec.pos_tag = detail::classify_gi_pos(fields, cols.pos_bearing);
        records.push_back(std::move(rec));
        ++sum.records;
    }
    if (!have_header) throw FormatError("polarity dictionary: empty (no header line)");
    return records;
}

/// Two-column TSV word -> lemma; '#' comments and blank lines ignored.
inline std::map<std::string, std::string> parse_lemma_map(std::istream& in) {
    if (!in) throw IoError("cannot read lemma-map stream");
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t{text::trim(line)};
        if (t.empty() || t[0] == '#') continue;
        const auto fields = text::split(t, '\t');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw FormatError("lemma map: expected two tab-separated columns, got: " + t);
        }
        out[text::to_lower(fields[0])] = text::to_lower(fields[1]);
    }
    return out;
}

namespace detail {

/// A word survives only if some lemma form of it exists in BOTH lexica:
/// first the word itself, then its lemma-map image.
inline std::optional<std::string> resolve_lemma(const std::string& word, const Lexicon& lex1,
                                                const Lexicon& lex3,
                                                const std::map<std::string, std::string>& lemma_map,
                                                bool* via_map) {
    const std::string lower = text::to_lower(word);
    if (lex1.has_lemma(lower) && lex3.has_lemma(lower)) {
        *via_map = false;
        return lower;
    }
    if (const auto it = lemma_map.find(lower); it != lemma_map.end()) {
        if (lex1.has_lemma(it->second) && lex3.has_lemma(it->second)) {
            *via_map = true;
            return it->second;
        }
    }
    return std::nullopt;
}

inline std::vector<Pos> union_pos(const std::string& lemma, const Lexicon& lex1,
                                  const Lexicon& lex3) {
    std::set<Pos> seen;
    for (Pos p : lex1.pos_of(lemma)) seen.insert(p);
    for (Pos p : lex3.pos_of(lemma)) seen.insert(p);
    // kAllPos order, not set order, so expansion order is stable and readable
    std::vector<Pos> out;
    for (Pos p : kAllPos) {
        if (seen.count(p) > 0) out.push_back(p);
    }
    return out;
}

/// The all-zero filter: an instance is dropped when every sense of
/// lemma#PoS carries (0,0) in both lexica. A missing entry counts as
/// all-zero on that side.
inline bool all_zero_in_both(const std::string& lemma, Pos pos, const Lexicon& lex1,
                             const Lexicon& lex3) {
    const LemmaPosEntry* e1 = lex1.lookup(lemma, pos);
    const LemmaPosEntry* e3 = lex3.lookup(lemma, pos);
    const bool zero1 = e1 == nullptr || all_senses_zero(*e1);
    const bool zero3 = e3 == nullptr || all_senses_zero(*e3);
    return zero1 && zero3;
}

inline void check_lexica(const Lexicon& lex1, const Lexicon& lex3) {
    if (lex1.size() == 0 || lex3.size() == 0) {
        throw ConfigError("alignment requires two non-empty lexica");
    }
}

} // namespace detail

/// Aligns valence-norm records: word -> lemma present in both lexica, one
/// instance per PoS the lemma has in the union of the two, then the
/// all-zero filter. Input order is preserved.
inline AlignedGold align_anew(const std::vector<AnewRecord>& records, const Lexicon& lex1,
                              const Lexicon& lex3,
                              const std::map<std::string, std::string>& lemma_map = {}) {
    detail::check_lexica(lex1, lex3);
    AlignedGold out;
    out.report.kind = GoldKind::anew;
    for (const AnewRecord& rec : records) {
        ++out.report.words_in;
        bool via_map = false;
        const auto lemma = detail::resolve_lemma(rec.word, lex1, lex3, lemma_map, &via_map);
        if (!lemma) {
            ++out.report.unaligned_words;
            continue;
        }
        ++out.report.aligned_words;
        if (via_map) ++out.report.lemma_map_hits;
        for (Pos pos : detail::union_pos(*lemma, lex1, lex3)) {
            ++out.report.expanded_instances;
            if (detail::all_zero_in_both(*lemma, pos, lex1, lex3)) {
                ++out.report.all_zero_filtered;
                continue;
            }
            GoldInstance inst;
            inst.lemma = *lemma;
            inst.pos = pos;
            inst.target_real = rescale_valence(rec.valence_mean);
            inst.subgroup.pos_class = pos;
            if (rec.valence_mean_male) {
                inst.subgroup.male_target = rescale_valence(*rec.valence_mean_male);
            }
            if (rec.valence_mean_female) {
                inst.subgroup.female_target = rescale_valence(*rec.valence_mean_female);
            }
            out.instances.push_back(std::move(inst));
            ++out.report.kept_instances;
        }
    }
    return out;
}

/// Aligns binary-polarity records. #n sense-suffixed entries are dropped
/// outright; modif expands to {a,r}, noun to {n}, verb to {v}, and rows with
/// no usable tag to every PoS the lemma has. Expansion only creates
/// instances for PoS present in at least one lexicon.
inline AlignedGold align_gi(const std::vector<GiRecord>& records, const Lexicon& lex1,
                            const Lexicon& lex3,
                            const std::map<std::string, std::string>& lemma_map = {}) {
    detail::check_lexica(lex1, lex3);
    AlignedGold out;
    out.report.kind = GoldKind::gi;
    for (const GiRecord& rec : records) {
        ++out.report.words_in;
        if (const auto hash = rec.entry.find('#'); hash != std::string::npos) {
            const std::string_view suffix = std::string_view(rec.entry).substr(hash + 1);
            const bool numeric = !suffix.empty() &&
                                 std::all_of(suffix.begin(), suffix.end(),
                                             [](unsigned char c) { return std::isdigit(c); });
            if (numeric) {
                ++out.report.sense_suffixed;
                continue;
            }
        }
        bool via_map = false;
        const auto lemma = detail::resolve_lemma(rec.entry, lex1, lex3, lemma_map, &via_map);
        if (!lemma) {
            ++out.report.unaligned_words;
            continue;
        }
        ++out.report.aligned_words;
        if (via_map) ++out.report.lemma_map_hits;

        const std::vector<Pos> available = detail::union_pos(*lemma, lex1, lex3);
        std::vector<Pos> expansion;
        switch (rec.pos_tag) {
            case GiPosTag::modif: expansion = {Pos::adjective, Pos::adverb}; break;
            case GiPosTag::noun: expansion = {Pos::noun}; break;
            case GiPosTag::verb: expansion = {Pos::verb}; break;
            case GiPosTag::other: expansion = available; break;
        }
        for (Pos pos : expansion) {
            const bool present = std::find(available.begin(), available.end(), pos) !=
                                 available.end();
            if (!present) continue;
            ++out.report.expanded_instances;
            if (detail::all_zero_in_both(*lemma, pos, lex1, lex3)) {
                ++out.report.all_zero_filtered;
                continue;
            }
            GoldInstance inst;
            inst.lemma = *lemma;
            inst.pos = pos;
            inst.target_class = rec.label;
            inst.subgroup.pos_class = pos;
            out.instances.push_back(std::move(inst));
            ++out.report.kept_instances;
        }
    }
    return out;
}

} // namespace swnprior

#endif
