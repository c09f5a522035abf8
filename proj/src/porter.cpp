#include <string>
#include <string_view>

#include "lexica/textproc.hpp"

namespace lexica {

namespace {

// Direct rendering of the published algorithm over a mutable buffer. `k_` is
// the index of the last character of the current stem and `j_` the end of the
// stem preceding a matched suffix.
class PorterStemmer {
  public:
    explicit PorterStemmer(std::string_view word)
        : b_(word), k_(static_cast<int>(word.size()) - 1) {}

    std::string run() {
        step1ab();
        if (k_ > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        b_.resize(static_cast<std::size_t>(k_ + 1));
        return std::move(b_);
    }

  private:
    bool cons(int i) const {
        switch (b_[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !cons(i - 1);
        default:
            return true;
        }
    }

    // Number of VC sequences in b_[0..j_].
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i) {
            if (!cons(i)) return true;
        }
        return false;
    }

    bool double_cons(int j) const { return j >= 1 && b_[j] == b_[j - 1] && cons(j); }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        const char ch = b_[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        const int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (std::string_view(b_).substr(static_cast<std::size_t>(k_ + 1 - len),
                                        static_cast<std::size_t>(len)) != s) {
            return false;
        }
        j_ = k_ - len;
        return true;
    }

    void set_to(std::string_view s) {
        b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
        k_ = j_ + static_cast<int>(s.size());
    }

    void replace_if_measured(std::string_view s) {
        if (m() > 0) set_to(s);
    }

    void step1ab() {
        if (b_[k_] == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (b_[k_ - 1] != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_cons(k_)) {
                --k_;
                const char ch = b_[k_];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (m() == 1 && cvc(k_)) {
                set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
    }

    struct Rule {
        std::string_view suffix;
        std::string_view replacement;
    };

    // First matching suffix wins, whether or not its measure condition holds.
    template <std::size_t N>
    void apply_first(const Rule (&rules)[N]) {
        for (const auto& r : rules) {
            if (ends(r.suffix)) {
                replace_if_measured(r.replacement);
                return;
            }
        }
    }

    void step2() {
        switch (b_[k_ - 1]) {
        case 'a': {
            static constexpr Rule r[] = {{"ational", "ate"}, {"tional", "tion"}};
            apply_first(r);
            break;
        }
        case 'c': {
            static constexpr Rule r[] = {{"enci", "ence"}, {"anci", "ance"}};
            apply_first(r);
            break;
        }
        case 'e': {
            static constexpr Rule r[] = {{"izer", "ize"}};
            apply_first(r);
            break;
        }
        case 'l': {
            static constexpr Rule r[] = {
                {"abli", "able"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
            apply_first(r);
            break;
        }
        case 'o': {
            static constexpr Rule r[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
            apply_first(r);
            break;
        }
        case 's': {
            static constexpr Rule r[] = {
                {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
            apply_first(r);
            break;
        }
        case 't': {
            static constexpr Rule r[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
            apply_first(r);
            break;
        }
        default:
            break;
        }
    }

    void step3() {
        switch (b_[k_]) {
        case 'e': {
            static constexpr Rule r[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
            apply_first(r);
            break;
        }
        case 'i': {
            static constexpr Rule r[] = {{"iciti", "ic"}};
            apply_first(r);
            break;
        }
        case 'l': {
            static constexpr Rule r[] = {{"ical", "ic"}, {"ful", ""}};
            apply_first(r);
            break;
        }
        case 's': {
            static constexpr Rule r[] = {{"ness", ""}};
            apply_first(r);
            break;
        }
        default:
            break;
        }
    }

    void step4() {
        switch (b_[k_ - 1]) {
        case 'a':
            if (ends("al")) break;
            return;
        case 'c':
            if (ends("ance") || ends("ence")) break;
            return;
        case 'e':
            if (ends("er")) break;
            return;
        case 'i':
            if (ends("ic")) break;
            return;
        case 'l':
            if (ends("able") || ends("ible")) break;
            return;
        case 'n':
            if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break;
            return;
        case 'o':
            if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) break;
            if (ends("ou")) break;
            return;
        case 's':
            if (ends("ism")) break;
            return;
        case 't':
            if (ends("ate") || ends("iti")) break;
            return;
        case 'u':
            if (ends("ous")) break;
            return;
        case 'v':
            if (ends("ive")) break;
            return;
        case 'z':
            if (ends("ize")) break;
            return;
        default:
            return;
        }
        if (m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[k_] == 'e') {
            const int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (b_[k_] == 'l' && double_cons(k_) && m() > 1) --k_;
    }

    std::string b_;
    int k_;
    int j_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.size() <= 2) {
        return std::string(word);
    }
    for (char c : word) {
        if (c < 'a' || c > 'z') {
            return std::string(word);
        }
    }
    return PorterStemmer(word).run();
}

}  // namespace lexica
