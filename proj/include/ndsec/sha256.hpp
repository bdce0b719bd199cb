#pragma once
#ifndef NDSEC_SHA256_HPP
#define NDSEC_SHA256_HPP

// SHA-256 (FIPS 180-4) and HMAC-SHA-256 (RFC 2104).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>

namespace ndsec {

using Digest = std::array<std::uint8_t, 32>;

class Sha256 {
public:
    static constexpr std::size_t block_size = 64;

    Sha256() { reset(); }

    void reset()
    {
        state_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                  0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
        length_ = 0;
        fill_ = 0;
    }

    Sha256& update(std::span<const std::uint8_t> data)
    {
        length_ += data.size();
        std::size_t i = 0;
        if (fill_ != 0) {
            std::size_t take = std::min(block_size - fill_, data.size());
            std::memcpy(buffer_.data() + fill_, data.data(), take);
            fill_ += take;
            i = take;
            if (fill_ < block_size) return *this;
            compress(buffer_.data());
            fill_ = 0;
        }
        for (; i + block_size <= data.size(); i += block_size) compress(data.data() + i);
        if (i < data.size()) {
            fill_ = data.size() - i;
            std::memcpy(buffer_.data(), data.data() + i, fill_);
        }
        return *this;
    }

    Digest finish()
    {
        const std::uint64_t bit_length = length_ * 8;
        const std::uint8_t pad = 0x80;
        update({&pad, 1});
        const std::uint8_t zero = 0;
        while (fill_ != block_size - 8) update({&zero, 1});
        std::array<std::uint8_t, 8> len{};
        for (int i = 0; i < 8; ++i) len[7 - i] = static_cast<std::uint8_t>(bit_length >> (8 * i));
        update(len);

        Digest out{};
        for (int i = 0; i < 8; ++i) {
            out[4 * i] = static_cast<std::uint8_t>(state_[i] >> 24);
            out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
            out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
            out[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
        }
        reset();
        return out;
    }

    static Digest hash(std::span<const std::uint8_t> data) { return Sha256{}.update(data).finish(); }

private:
    void compress(const std::uint8_t* block)
    {
        static constexpr std::array<std::uint32_t, 64> k = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
            0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
            0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
            0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
            0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
            0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
            0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

        std::array<std::uint32_t, 64> w{};
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t{block[4 * i]} << 24) | (std::uint32_t{block[4 * i + 1]} << 16) |
                   (std::uint32_t{block[4 * i + 2]} << 8) | std::uint32_t{block[4 * i + 3]};
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }

        auto [a, b, c, d, e, f, g, h] = state_;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
            std::uint32_t s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        state_[0] += a;
        state_[1] += b;
        state_[2] += c;
        state_[3] += d;
        state_[4] += e;
        state_[5] += f;
        state_[6] += g;
        state_[7] += h;
    }

    std::array<std::uint32_t, 8> state_{};
    std::array<std::uint8_t, block_size> buffer_{};
    std::uint64_t length_ = 0;
    std::size_t fill_ = 0;
};

/// HMAC-SHA-256. Keys longer than the block size are hashed first.
inline Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message)
{
    std::array<std::uint8_t, Sha256::block_size> k{};
    if (key.size() > Sha256::block_size) {
        Digest d = Sha256::hash(key);
        std::memcpy(k.data(), d.data(), d.size());
    } else if (!key.empty()) {
        std::memcpy(k.data(), key.data(), key.size());
    }

    std::array<std::uint8_t, Sha256::block_size> ipad{}, opad{};
    for (std::size_t i = 0; i < k.size(); ++i) {
        ipad[i] = k[i] ^ 0x36;
        opad[i] = k[i] ^ 0x5c;
    }
    Digest inner = Sha256{}.update(ipad).update(message).finish();
    return Sha256{}.update(opad).update(inner).finish();
}

}  // namespace ndsec

#endif  // NDSEC_SHA256_HPP
