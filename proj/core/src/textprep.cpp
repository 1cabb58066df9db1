#include "jokemeter/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jokemeter {

namespace {

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> words;
    std::istringstream is(s);
    std::string w;
    while (is >> w) words.push_back(w);
    return words;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_reserved_spelling(const std::string& w) {
    return w == kBosToken || w == kEosToken || w == kPadToken || w == kUnkToken ||
           w == "#" || w == "/";
}

int reserved_id(const std::string& w) {
    if (w == kPadToken) return kPad;
    if (w == kUnkToken) return kUnk;
    if (w == kBosToken) return kBos;
    if (w == kEosToken) return kEos;
    if (w == "#") return kHash;
    if (w == "/") return kSlash;
    return -1;
}

}  // namespace

void Vocab::add_token(const std::string& t) {
    index_.emplace(t, static_cast<int>(tokens_.size()));
    tokens_.push_back(t);
    max_token_len_ = std::max(max_token_len_, t.size());
}

void Vocab::init_reserved() {
    add_token(kPadToken);
    add_token(kUnkToken);
    add_token(kBosToken);
    add_token(kEosToken);
    add_token("#");
    add_token("/");
}

Vocab Vocab::train(const std::vector<std::string>& corpus, int cap, bool lowercase) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    if (cap < kNumReserved) throw std::invalid_argument("cap below reserved token count");

    Vocab v;
    v.lowercase_ = lowercase;
    v.init_reserved();

    // Word frequency table; each word type as a symbol sequence, starting
    // from single bytes.
    std::vector<std::vector<std::string>> word_syms;
    std::vector<long long> word_freq;
    std::map<std::string, std::size_t> word_index;
    for (const auto& line : corpus) {
        for (auto& w : split_words(lowercase ? to_lower(line) : line)) {
            if (is_reserved_spelling(w)) continue;
            auto [it, inserted] = word_index.emplace(w, word_syms.size());
            if (inserted) {
                std::vector<std::string> syms;
                for (char c : w) syms.emplace_back(1, c);
                word_syms.push_back(std::move(syms));
                word_freq.push_back(1);
            } else {
                ++word_freq[it->second];
            }
        }
    }

    // Single-byte tokens first, in order of first appearance.
    for (const auto& syms : word_syms) {
        for (const auto& s : syms) {
            if (v.index_.count(s)) continue;
            if (v.size() >= cap)
                throw std::runtime_error("vocab cap too small to cover corpus characters");
            v.add_token(s);
        }
    }

    // Merge loop: highest pair count wins, ties broken lexicographically.
    while (v.size() < cap) {
        std::map<std::pair<std::string, std::string>, long long> pair_counts;
        for (std::size_t wi = 0; wi < word_syms.size(); ++wi) {
            const auto& syms = word_syms[wi];
            for (std::size_t i = 0; i + 1 < syms.size(); ++i)
                pair_counts[{syms[i], syms[i + 1]}] += word_freq[wi];
        }
        std::pair<std::string, std::string> best;
        long long best_count = 0;
        for (const auto& [p, c] : pair_counts) {
            if (c > best_count) {
                best_count = c;
                best = p;
            }
        }
        if (best_count < 2) break;
        std::string merged = best.first + best.second;
        if (!v.index_.count(merged)) v.add_token(merged);
        for (auto& syms : word_syms) {
            for (std::size_t i = 0; i + 1 < syms.size();) {
                if (syms[i] == best.first && syms[i + 1] == best.second) {
                    syms[i] = merged;
                    syms.erase(syms.begin() + i + 1);
                } else {
                    ++i;
                }
            }
        }
    }
    return v;
}

int Vocab::id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocab::segment_word(const std::string& word) const {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < word.size()) {
        std::size_t len = std::min(max_token_len_, word.size() - pos);
        for (; len >= 1; --len) {
            auto it = index_.find(word.substr(pos, len));
            if (it != index_.end() && it->second >= kNumReserved) {
                out.push_back(it->second);
                break;
            }
        }
        if (len == 0) {
            out.push_back(kUnk);
            len = 1;
        }
        pos += len;
    }
    return out;
}

std::uint64_t Vocab::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (const auto& t : tokens_) {
        for (char c : t) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

void Vocab::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write vocab: " + path);
    out << "#lowercase " << (lowercase_ ? 1 : 0) << "\n";
    for (const auto& t : tokens_) out << t << "\n";
}

Vocab Vocab::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocab: " + path);
    Vocab v;
    std::string line;
    if (!std::getline(in, line) || line.rfind("#lowercase ", 0) != 0)
        throw std::runtime_error("bad vocab header in " + path);
    v.lowercase_ = line.back() == '1';
    std::vector<std::string> tokens;
    while (std::getline(in, line)) tokens.push_back(line);
    if (tokens.size() < kNumReserved) throw std::runtime_error("vocab too short");
    for (const auto& t : tokens) v.add_token(t);
    for (int i = 0; i < kNumReserved; ++i)
        if (reserved_id(v.tokens_[i]) != i)
            throw std::runtime_error("reserved tokens out of order in " + path);
    return v;
}

std::string assemble_input(const HeadlineEdit& h) {
    auto open = h.original.find('<');
    auto close = h.original.find("/>");
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("original has no marked span");
    std::string prefix = h.original.substr(0, open);
    std::string span = h.original.substr(open + 1, close - open - 1);
    std::string suffix = h.original.substr(close + 2);

    std::vector<std::string> parts;
    parts.push_back(kBosToken);
    for (auto& w : split_words(prefix)) parts.push_back(w);
    parts.push_back("#");
    for (auto& w : split_words(span)) parts.push_back(w);
    parts.push_back("/");
    for (auto& w : split_words(h.edit)) parts.push_back(w);
    parts.push_back("#");
    for (auto& w : split_words(suffix)) parts.push_back(w);
    parts.push_back(kEosToken);

    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += parts[i];
    }
    return out;
}

TokenSequence encode(const Vocab& v, const std::string& assembled, int max_len) {
    auto words = split_words(assembled);

    // Locate `# span / edit #`: first hash, then slash, then closing hash.
    std::size_t h1 = words.size(), s1 = words.size(), h2 = words.size();
    for (std::size_t i = 0; i < words.size(); ++i)
        if (words[i] == "#") { h1 = i; break; }
    for (std::size_t i = h1 + 1; i < words.size(); ++i)
        if (words[i] == "/") { s1 = i; break; }
    for (std::size_t i = s1 + 1; i < words.size(); ++i)
        if (words[i] == "#") { h2 = i; break; }
    if (h1 >= words.size() || s1 >= words.size() || h2 >= words.size() || s1 + 1 == h2)
        throw std::runtime_error("edit region not found in input: " + assembled);

    std::vector<int> ids;
    int edit_begin = -1, edit_end = -1;
    for (std::size_t w = 0; w < words.size(); ++w) {
        if (w == s1 + 1) edit_begin = static_cast<int>(ids.size());
        int rid = reserved_id(words[w]);
        if (rid >= 0) {
            ids.push_back(rid);
        } else {
            auto piece = v.lowercase() ? to_lower(words[w]) : words[w];
            for (int t : v.segment_word(piece)) ids.push_back(t);
        }
        if (w == h2 - 1) edit_end = static_cast<int>(ids.size());
    }

    TokenSequence seq;
    if (static_cast<int>(ids.size()) > max_len) {
        ids.resize(max_len);
        ids[max_len - 1] = kEos;
    }
    seq.real_length = static_cast<int>(ids.size());
    ids.resize(max_len, kPad);
    seq.ids = std::move(ids);
    seq.edit_begin = std::min(edit_begin, seq.real_length - 1);
    seq.edit_end = std::min(edit_end, seq.real_length);
    if (seq.edit_begin < 0 || seq.edit_end <= seq.edit_begin)
        throw std::runtime_error("empty edit span after encoding");
    return seq;
}

}  // namespace jokemeter
