#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "jokemeter/corpus.hpp"

namespace jokemeter {

// Reserved token ids; never reassigned.
enum ReservedId : int {
    kPad = 0,
    kUnk = 1,
    kBos = 2,
    kEos = 3,
    kHash = 4,
    kSlash = 5,
};

inline constexpr int kNumReserved = 6;
inline constexpr int kDefaultVocabCap = 30000;
inline constexpr int kDefaultSeqLen = 512;

inline constexpr const char* kBosToken = "<s>";
inline constexpr const char* kEosToken = "</s>";
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";

// Fixed-length encoded model input. `ids` always has length seq_len;
// PAD only after real_length. edit_span is the half-open token index
// range of the edit word's subword tokens.
struct TokenSequence {
    std::vector<int> ids;
    int real_length = 0;
    int edit_begin = 0;
    int edit_end = 0;  // exclusive
};

// Byte-pair-encoding subword vocabulary. Reserved tokens occupy ids 0..5;
// learned tokens follow in training order. Every single byte seen in the
// training corpus is guaranteed a token of its own.
class Vocab {
public:
    Vocab() = default;

    // Deterministic given corpus order and cap. Lowercases when
    // `lowercase` is set (the default used throughout the pipeline).
    static Vocab train(const std::vector<std::string>& corpus,
                       int cap = kDefaultVocabCap, bool lowercase = true);

    static Vocab load(const std::string& path);
    void save(const std::string& path) const;

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::string& token(int id) const { return tokens_.at(id); }
    // Returns kUnk for unknown tokens.
    int id(const std::string& token) const;
    bool lowercase() const { return lowercase_; }

    // Greedy longest-match subword segmentation of one word (no
    // whitespace). Unseen bytes map to kUnk.
    std::vector<int> segment_word(const std::string& word) const;

    // FNV-1a over the token list; used to bind checkpoints to a vocab.
    std::uint64_t hash() const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
    std::size_t max_token_len_ = 1;
    bool lowercase_ = true;

    void add_token(const std::string& t);
    void init_reserved();
};

// `<s> prefix # span / edit # suffix </s>`, single-space separated.
std::string assemble_input(const HeadlineEdit& h);

// Encode an assembled input string to a fixed-length sequence. Throws if
// the `# ... / ... #` edit region cannot be located.
TokenSequence encode(const Vocab& v, const std::string& assembled,
                     int max_len = kDefaultSeqLen);

}  // namespace jokemeter
