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
#ifndef SWNPRIOR_LEXICON_HPP
#define SWNPRIOR_LEXICON_HPP

#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "swnprior/errors.hpp"
#include "swnprior/text.hpp"

namespace swnprior {

enum class Pos : char { adjective = 'a', noun = 'n', verb = 'v', adverb = 'r' };

inline constexpr std::array<Pos, 4> kAllPos = {Pos::adjective, Pos::noun, Pos::verb,
                                               Pos::adverb};

inline char to_char(Pos p) { return static_cast<char>(p); }

inline std::optional<Pos> pos_from_char(char c) {
    switch (c) {
        case 'a': return Pos::adjective;
        case 'n': return Pos::noun;
        case 'v': return Pos::verb;
        case 'r': return Pos::adverb;
        default: return std::nullopt;
    }
}

enum class SwnVersion { swn1, swn3 };

inline const char* to_string(SwnVersion v) { return v == SwnVersion::swn1 ? "swn1" : "swn3"; }

inline std::optional<SwnVersion> swn_version_from_string(std::string_view s) {
    const std::string lower = text::to_lower(s);
    if (lower == "swn1" || lower == "1" || lower == "v1") return SwnVersion::swn1;
    if (lower == "swn3" || lower == "3" || lower == "v3") return SwnVersion::swn3;
    return std::nullopt;
}

/// One synset's positive/negative score pair as inherited by a lemma#PoS.
struct SenseEntry {
    double pos_score = 0.0;
    double neg_score = 0.0;
    int sense_number = 1;

    friend bool operator==(const SenseEntry&, const SenseEntry&) = default;
};

/// A lemma plus PoS with its senses ordered by sense number, i.e. by
/// descending corpus frequency (sense 1 is the most frequent).
struct LemmaPosEntry {
    std::string lemma;
    Pos pos = Pos::adjective;
    std::vector<SenseEntry> senses;

    friend bool operator==(const LemmaPosEntry&, const LemmaPosEntry&) = default;
};

inline bool all_senses_zero(const LemmaPosEntry& entry) {
    for (const auto& s : entry.senses) {
        if (s.pos_score != 0.0 || s.neg_score != 0.0) return false;
    }
    return true;
}

/// (posScores, negScores) in sense-number order; always equal length.
inline std::pair<std::vector<double>, std::vector<double>> sense_vectors(
    const LemmaPosEntry& entry) {
    std::vector<double> pos, neg;
    pos.reserve(entry.senses.size());
    neg.reserve(entry.senses.size());
    for (const auto& s : entry.senses) {
        pos.push_back(s.pos_score);
        neg.push_back(s.neg_score);
    }
    return {std::move(pos), std::move(neg)};
}

struct ParseSummary {
    SwnVersion version = SwnVersion::swn3;
    std::size_t total_lines = 0;
    std::size_t comment_lines = 0;
    /// Non-comment, non-header lines; accepted + skipped == data_lines.
    std::size_t data_lines = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
    /// Duplicate (lemma, pos, sense) tokens across lines; first occurrence wins.
    std::size_t conflicts = 0;
    bool header_detected = false;
    std::vector<std::string> issues;
};

/// Immutable after construction; safe for concurrent reads.
class Lexicon {
public:
    using Key = std::pair<std::string, Pos>;

    Lexicon() = default;
    Lexicon(SwnVersion version, std::map<Key, LemmaPosEntry> entries)
        : version_(version), entries_(std::move(entries)) {}

    SwnVersion version() const { return version_; }
    std::size_t size() const { return entries_.size(); }
    const std::map<Key, LemmaPosEntry>& entries() const { return entries_; }

    /// Case-insensitive on lemma; returns nullptr on miss, never throws.
    const LemmaPosEntry* lookup(std::string_view lemma, Pos pos) const {
        auto it = entries_.find(Key{text::to_lower(lemma), pos});
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool has_lemma(std::string_view lemma) const {
        const std::string key = text::to_lower(lemma);
        for (Pos p : kAllPos) {
            if (entries_.count(Key{key, p}) > 0) return true;
        }
        return false;
    }

    std::vector<Pos> pos_of(std::string_view lemma) const {
        const std::string key = text::to_lower(lemma);
        std::vector<Pos> out;
        for (Pos p : kAllPos) {
            if (entries_.count(Key{key, p}) > 0) out.push_back(p);
        }
        return out;
    }

    friend bool operator==(const Lexicon& a, const Lexicon& b) {
        return a.version_ == b.version_ && a.entries_ == b.entries_;
    }

private:
    SwnVersion version_ = SwnVersion::swn3;
    std::map<Key, LemmaPosEntry> entries_;
};

struct SwnParseResult {
    Lexicon lexicon;
    ParseSummary summary;
};

namespace detail {

struct SwnColumns {
    int pos = 0;
    int id = 1;
    int pos_score = 2;
    int neg_score = 3;
    int terms = 4;
};

/// Recognizes an explicit (non-comment) header row naming the score columns.
inline std::optional<SwnColumns> match_swn_header(const std::vector<std::string>& cells) {
    SwnColumns cols;
    int found = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string norm = text::normalize_header(cells[i]);
        if (norm == "pos") {
            cols.pos = static_cast<int>(i);
            ++found;
        } else if (norm == "id" || norm == "offset") {
            cols.id = static_cast<int>(i);
        } else if (norm == "posscore" || norm == "pos score") {
            cols.pos_score = static_cast<int>(i);
            ++found;
        } else if (norm == "negscore" || norm == "neg score") {
            cols.neg_score = static_cast<int>(i);
            ++found;
        } else if (norm == "synsetterms" || norm == "synset terms") {
            cols.terms = static_cast<int>(i);
            ++found;
        }
    }
    if (found == 4) return cols;
    return std::nullopt;
}

} // namespace detail

/// Parses a SentiWordNet-format TSV stream (columns PoS, ID, PosScore,
/// NegScore, SynsetTerms[, Gloss]). '#'-lines are comments; a header row is
/// honored when present, otherwise the fixed column order is assumed.
/// Malformed lines are skipped and reported with their line numbers.
inline SwnParseResult parse_swn(std::istream& in, SwnVersion version) {
    if (!in) throw IoError("parse_swn: input stream is not readable");

    ParseSummary summary;
    summary.version = version;

    std::map<Lexicon::Key, std::vector<SenseEntry>> staged;
    std::set<std::tuple<std::string, Pos, int>> seen;
    detail::SwnColumns cols;
    bool saw_first_data_row = false;

    std::string line;
    std::size_t line_no = 0;
    auto reject = [&](const std::string& why) {
        ++summary.skipped;
        summary.issues.push_back("line " + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        ++summary.total_lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            ++summary.comment_lines;
            continue;
        }

        std::vector<std::string> cells = text::split(line, '\t');
        if (!saw_first_data_row) {
            saw_first_data_row = true;
            if (auto header = detail::match_swn_header(cells)) {
                cols = *header;
                summary.header_detected = true;
                continue;
            }
        }

        ++summary.data_lines;
        const int needed = std::max({cols.pos, cols.pos_score, cols.neg_score, cols.terms});
        if (static_cast<int>(cells.size()) <= needed) {
            reject("expected at least " + std::to_string(needed + 1) + " tab-separated columns");
            continue;
        }

        const std::string_view pos_cell = text::trim(cells[cols.pos]);
        std::optional<Pos> pos;
        if (pos_cell.size() == 1) {
            // satellite adjectives ('s') fold into 'a'
            pos = pos_from_char(pos_cell[0] == 's' ? 'a' : pos_cell[0]);
        }
        if (!pos) {
            reject("unknown PoS tag '" + std::string(pos_cell) + "'");
            continue;
        }

        const auto pos_score = text::parse_double(cells[cols.pos_score]);
        const auto neg_score = text::parse_double(cells[cols.neg_score]);
        if (!pos_score || !neg_score) {
            reject("unparsable score");
            continue;
        }
        if (*pos_score < 0.0 || *pos_score > 1.0 || *neg_score < 0.0 || *neg_score > 1.0) {
            reject("score outside [0,1]");
            continue;
        }

        const std::vector<std::string> tokens = text::split_whitespace(cells[cols.terms]);
        if (tokens.empty()) {
            reject("empty SynsetTerms");
            continue;
        }
        std::vector<std::pair<std::string, int>> members;
        std::set<std::string> lemmas_in_line;
        bool bad = false;
        for (const std::string& token : tokens) {
            const std::size_t hash = token.rfind('#');
            if (hash == std::string::npos || hash == 0 || hash + 1 == token.size()) {
                reject("malformed SynsetTerms token '" + token + "'");
                bad = true;
                break;
            }
            const auto sense = text::parse_int(token.substr(hash + 1));
            if (!sense || *sense < 1) {
                reject("non-positive sense number in '" + token + "'");
                bad = true;
                break;
            }
            std::string lemma = text::to_lower(token.substr(0, hash));
            if (!lemmas_in_line.insert(lemma).second) {
                reject("lemma '" + lemma + "' repeats with multiple sense numbers in one synset");
                bad = true;
                break;
            }
            members.emplace_back(std::move(lemma), static_cast<int>(*sense));
        }
        if (bad) continue;

        ++summary.accepted;
        for (auto& [lemma, sense] : members) {
            if (!seen.insert({lemma, *pos, sense}).second) {
                ++summary.conflicts;
                continue;
            }
            staged[{lemma, *pos}].push_back(SenseEntry{*pos_score, *neg_score, sense});
        }
    }

    if (summary.accepted == 0) {
        throw FormatError("parse_swn: no valid data lines (empty lexicon)");
    }

    std::map<Lexicon::Key, LemmaPosEntry> entries;
    for (auto& [key, senses] : staged) {
        std::sort(senses.begin(), senses.end(),
                  [](const SenseEntry& a, const SenseEntry& b) {
                      return a.sense_number < b.sense_number;
                  });
        entries[key] = LemmaPosEntry{key.first, key.second, std::move(senses)};
    }
    return SwnParseResult{Lexicon(version, std::move(entries)), std::move(summary)};
}

/// Re-serializes every (lemma, pos, sense, posScore, negScore) tuple in the
/// SentiWordNet TSV layout; parse_swn on the output reproduces the lexicon.
inline void write_swn_tsv(const Lexicon& lexicon, std::ostream& out) {
    out << "POS\tID\tPosScore\tNegScore\tSynsetTerms\n";
    long row = 0;
    char buf[64];
    for (const auto& [key, entry] : lexicon.entries()) {
        for (const auto& sense : entry.senses) {
            out << to_char(entry.pos) << '\t' << ++row << '\t';
            std::snprintf(buf, sizeof buf, "%.17g", sense.pos_score);
            out << buf << '\t';
            std::snprintf(buf, sizeof buf, "%.17g", sense.neg_score);
            out << buf << '\t' << entry.lemma << '#' << sense.sense_number << '\n';
        }
    }
}

} // namespace swnprior

#endif
