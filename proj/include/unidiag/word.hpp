#pragma once

// The four automata M0, N0, Mp, Np, word enumeration in canonical orders,
// depth bookkeeping and the two length-preserving bijections.
//
// ASCII letter encoding: R L A B for the M-languages, and . < > * for the
// N-languages (dot, open bracket, close bracket, star).

#include "unidiag/field.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

namespace unidiag {

struct AlphabetMismatch : field_error {
    explicit AlphabetMismatch(const std::string& w)
        : field_error("AlphabetMismatch: \"" + w + "\"") {}
};
struct NotAccepted : field_error {
    explicit NotAccepted(const std::string& w) : field_error("NotAccepted: \"" + w + "\"") {}
};

enum class AutomatonId { M0, N0, Mp, Np };

inline bool m_alphabet(AutomatonId a) { return a == AutomatonId::M0 || a == AutomatonId::Mp; }

struct Word {
    AutomatonId automaton = AutomatonId::M0;
    // Height parameter h = p-1 for Mp/Np; the automata make sense for any
    // height >= 1, primality only matters to the algebra modules.
    uint32_t p = 0;
    std::string letters;

    size_t size() const { return letters.size(); }
    bool operator==(const Word& o) const {
        return automaton == o.automaton && p == o.p && letters == o.letters;
    }
};

inline void check_alphabet(const Word& w) {
    const char* ok = nullptr;
    switch (w.automaton) {
        case AutomatonId::M0: ok = "RL"; break;
        case AutomatonId::N0: ok = ".<>"; break;
        case AutomatonId::Mp: ok = "RLAB"; break;
        case AutomatonId::Np: ok = ".<>*"; break;
    }
    for (char c : w.letters)
        if (!strchr(ok, c)) throw AlphabetMismatch(w.letters);
}

inline int letter_step(char c) {
    switch (c) {
        case 'R': case 'B': case '<': return 1;
        case 'L': case 'A': case '>': return -1;
        default: return 0; // . and *
    }
}

// Depth profile d_1..d_n (depth after each letter).
inline std::vector<int> depth_profile(const std::string& letters) {
    std::vector<int> d;
    int cur = 0;
    for (char c : letters) {
        cur += letter_step(c);
        d.push_back(cur);
    }
    return d;
}

inline bool accepts(const Word& w) {
    check_alphabet(w);
    const std::string& s = w.letters;
    int d = 0;
    switch (w.automaton) {
        case AutomatonId::M0:
            for (char c : s) {
                d += letter_step(c);
                if (d < 0) return false;
            }
            return true;
        case AutomatonId::N0:
            for (char c : s) {
                if (c == '.' && d != 0) return false;
                d += letter_step(c);
                if (d < 0) return false;
            }
            return d == 0;
        case AutomatonId::Mp: {
            int h = static_cast<int>(w.p) - 1;
            // w = wl . wr with wl over {R,L}, wr over {A,B}; wl stays in
            // [0, h-1] strictly before its end and may reach h only at its
            // final position; wr is nonempty only if d(wl) = h.
            size_t split = 0;
            while (split < s.size() && (s[split] == 'R' || s[split] == 'L')) ++split;
            for (size_t i = split; i < s.size(); ++i)
                if (s[i] != 'A' && s[i] != 'B') return false;
            d = 0;
            for (size_t i = 0; i < split; ++i) {
                d += letter_step(s[i]);
                if (d < 0 || d > h) return false;
                if (d == h && i + 1 != split) return false;
            }
            if (split < s.size() && d != h) return false;
            return true;
        }
        case AutomatonId::Np: {
            int h = static_cast<int>(w.p) - 1;
            for (char c : s) {
                if (c == '.' && d != 0) return false;
                if (c == '*' && d != h) return false;
                d += letter_step(c);
                if (d < 0 || d > h) return false;
            }
            return d == 0;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Bijections

// Replace each depth-increasing R (one whose level is never undercut later)
// with a dot, every other R with <, and every L with >.
inline Word m0_to_n0(const Word& w) {
    if (w.automaton != AutomatonId::M0 || !accepts(w)) throw NotAccepted(w.letters);
    std::vector<int> d = depth_profile(w.letters);
    size_t n = w.letters.size();
    std::string out(n, '?');
    std::vector<int> minAfter(n + 1, 1 << 30);
    for (size_t i = n; i-- > 0;) minAfter[i] = std::min(minAfter[i + 1], d[i]);
    for (size_t i = 0; i < n; ++i) {
        if (w.letters[i] == 'L') out[i] = '>';
        else out[i] = (d[i] <= minAfter[i + 1]) ? '.' : '<';
    }
    return Word{AutomatonId::N0, 0, out};
}

inline Word n0_to_m0(const Word& w) {
    if (w.automaton != AutomatonId::N0 || !accepts(w)) throw NotAccepted(w.letters);
    std::string out;
    for (char c : w.letters) out += (c == '>') ? 'L' : 'R';
    return Word{AutomatonId::M0, 0, out};
}

// Mountain -> plateau. Walk the mountain right to left keeping the current
// plateau height; an up-step met at plateau height 0 swings up to a dot and
// a down-step met at height h swings down to a star (the paper's *gap
// counter is implicit in the tracked height).
inline Word mp_to_np(const Word& w) {
    if (w.automaton != AutomatonId::Mp || !accepts(w)) throw NotAccepted(w.letters);
    int h = static_cast<int>(w.p) - 1;
    std::vector<int> d = depth_profile(w.letters);
    bool reaches = false;
    for (int x : d)
        if (x >= h) reaches = true;
    size_t n = w.letters.size();
    if (!reaches || n == 0) {
        Word m0{AutomatonId::M0, 0, w.letters};
        Word out = m0_to_n0(m0);
        return Word{AutomatonId::Np, w.p, out.letters};
    }
    std::string out(n, '?');
    int H = 0;
    for (size_t i = n; i-- > 0;) {
        bool up = letter_step(w.letters[i]) == 1;
        if (up) {
            if (H == 0) out[i] = '.';
            else { out[i] = '<'; --H; }
        } else {
            if (H == h) out[i] = '*';
            else { out[i] = '>'; ++H; }
        }
    }
    Word res{AutomatonId::Np, w.p, out};
    if (H != 0 || !accepts(res)) throw field_error("internal: mountain->plateau failed");
    return res;
}

// Plateau -> mountain. Dots swing up, stars swing down; letters are R/L up
// to the first time the walk reaches relative height h, A/B afterwards.
inline Word np_to_mp(const Word& w) {
    if (w.automaton != AutomatonId::Np || !accepts(w)) throw NotAccepted(w.letters);
    int h = static_cast<int>(w.p) - 1;
    size_t n = w.letters.size();
    std::string out(n, '?');
    int depth = 0;
    bool reached = false;
    for (size_t i = 0; i < n; ++i) {
        char c = w.letters[i];
        bool up = (c == '<' || c == '.');
        depth += up ? 1 : -1;
        if (!reached) {
            out[i] = up ? 'R' : 'L';
            if (depth == h) reached = true;
        } else {
            out[i] = up ? 'B' : 'A';
        }
    }
    Word res{AutomatonId::Mp, w.p, out};
    if (!accepts(res)) throw field_error("internal: plateau->mountain failed");
    return res;
}

// ---------------------------------------------------------------------------
// Canonical orders and enumeration

// M0: ascending lexicographic with L < R (so the pairing triangularity of
// the light-leaf proof holds along the order).
inline bool less_m0(const std::string& a, const std::string& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] == b[i]) continue;
        return a[i] == 'L';
    }
    return a.size() < b.size();
}

// Mp: <_p -- first lexicographic on the RL part with L < R, then reverse
// lexicographic on the AB part with B < A.
inline bool less_mp(const std::string& a, const std::string& b) {
    size_t sa = 0, sb = 0;
    while (sa < a.size() && (a[sa] == 'R' || a[sa] == 'L')) ++sa;
    while (sb < b.size() && (b[sb] == 'R' || b[sb] == 'L')) ++sb;
    std::string la = a.substr(0, sa), lb = b.substr(0, sb);
    if (la != lb) return less_m0(la, lb);
    std::string ra = a.substr(sa), rb = b.substr(sb);
    for (size_t i = ra.size(); i-- > 0;) {
        if (ra[i] == rb[i]) continue;
        return ra[i] == 'B';
    }
    return false;
}

inline std::vector<Word> enumerate_words(AutomatonId id, uint32_t p, size_t n) {
    // Enumerate the matching M-language directly, then transport to the
    // N-language through the bijection so basis indexing is unambiguous.
    bool charp = (id == AutomatonId::Mp || id == AutomatonId::Np);
    std::vector<std::string> acc;
    std::string cur;
    // Reaching depth h switches to the AB phase: the RL part may touch h
    // only at its own end, after which only A/B letters are legal.
    auto rec2 = [&](auto&& self, size_t len, int depth, bool inAB) -> void {
        if (len == n) {
            acc.push_back(cur);
            return;
        }
        int h = static_cast<int>(p) - 1;
        if (!inAB) {
            for (char c : {'R', 'L'}) {
                int nd = depth + letter_step(c);
                if (nd < 0) continue;
                if (charp && nd > h) continue;
                cur += c;
                if (charp && nd == h) self(self, len + 1, nd, true); // RL part ends here
                else self(self, len + 1, nd, false);
                cur.pop_back();
            }
        } else {
            for (char c : {'A', 'B'}) {
                cur += c;
                self(self, len + 1, depth + letter_step(c), true);
                cur.pop_back();
            }
        }
    };
    rec2(rec2, 0, 0, false);
    if (charp) std::sort(acc.begin(), acc.end(), less_mp);
    else std::sort(acc.begin(), acc.end(), less_m0);

    std::vector<Word> out;
    out.reserve(acc.size());
    for (auto& s : acc) {
        Word m{charp ? AutomatonId::Mp : AutomatonId::M0, charp ? p : 0, s};
        if (id == AutomatonId::M0 || id == AutomatonId::Mp) out.push_back(m);
        else if (id == AutomatonId::N0) out.push_back(m0_to_n0(m));
        else out.push_back(mp_to_np(m));
    }
    return out;
}

// Independent count by dynamic programming over automaton states.
inline BigInt count_words(AutomatonId id, uint32_t p, size_t n) {
    if (id == AutomatonId::M0) {
        // states: depth 0..n
        std::vector<BigInt> dp(n + 1, 0);
        dp[0] = 1;
        for (size_t step = 0; step < n; ++step) {
            std::vector<BigInt> nx(n + 1, 0);
            for (size_t d = 0; d <= n; ++d) {
                if (dp[d] == 0) continue;
                if (d + 1 <= n) nx[d + 1] += dp[d];
                if (d >= 1) nx[d - 1] += dp[d];
            }
            dp.swap(nx);
        }
        BigInt total = 0;
        for (auto& v : dp) total += v;
        return total;
    }
    if (id == AutomatonId::N0) {
        // states: depth; dot allowed only at depth 0; must end at 0
        std::vector<BigInt> dp(n + 1, 0);
        dp[0] = 1;
        for (size_t step = 0; step < n; ++step) {
            std::vector<BigInt> nx(n + 1, 0);
            for (size_t d = 0; d <= n; ++d) {
                if (dp[d] == 0) continue;
                if (d == 0) nx[0] += dp[d]; // dot
                if (d + 1 <= n) nx[d + 1] += dp[d];
                if (d >= 1) nx[d - 1] += dp[d];
            }
            dp.swap(nx);
        }
        return dp[0];
    }
    int h = static_cast<int>(p) - 1;
    if (id == AutomatonId::Mp) {
        // states: (depth, phase) with phase 0 = RL (depth < h), 1 = AB
        // (tracked depth no longer constrained; only the count matters)
        std::vector<BigInt> rl(std::max(h, 1), 0);
        BigInt ab = 0; // number of words currently in the AB phase
        if (h == 0) return n == 0 ? 1 : 0;
        rl[0] = 1;
        BigInt end_total = (n == 0) ? 1 : 0;
        for (size_t step = 0; step < n; ++step) {
            std::vector<BigInt> nrl(h, 0);
            BigInt nab = ab * 2; // A or B
            for (int d = 0; d < h; ++d) {
                if (rl[d] == 0) continue;
                if (d + 1 < h) nrl[d + 1] += rl[d];
                else nab += rl[d]; // reaching h ends the RL part
                if (d >= 1) nrl[d - 1] += rl[d];
            }
            rl = nrl;
            ab = nab;
            if (step + 1 == n) {
                for (auto& v : rl) end_total += v;
                end_total += ab;
            }
        }
        return end_total;
    }
    // Np: depth in [0,h], dot at 0, star at h, end at 0
    std::vector<BigInt> dp(h + 1, 0);
    dp[0] = 1;
    for (size_t step = 0; step < n; ++step) {
        std::vector<BigInt> nx(h + 1, 0);
        for (int d = 0; d <= h; ++d) {
            if (dp[d] == 0) continue;
            if (d == 0) nx[0] += dp[d];           // dot
            if (d == h) nx[h] += dp[d];           // star
            if (d + 1 <= h) nx[d + 1] += dp[d];   // <
            if (d >= 1) nx[d - 1] += dp[d];       // >
        }
        dp.swap(nx);
    }
    return dp[0];
}

inline Word parse_word(AutomatonId id, uint32_t p, const std::string& letters) {
    Word w{id, (id == AutomatonId::Mp || id == AutomatonId::Np) ? p : 0, letters};
    check_alphabet(w);
    return w;
}

} // namespace unidiag
