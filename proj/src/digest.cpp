// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0

#include "torsift/digest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>

#include "torsift/errors.hpp"

namespace torsift {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

std::string finish_hex(EVP_MD_CTX* ctx) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, md, &len) != 1) raise(errc::internal, "digest finalize failed");
  return to_hex(byte_span(md, len));
}

}  // namespace

std::string sha256_hex(byte_span bytes) {
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    raise(errc::internal, "digest init failed");
  }
  if (!bytes.empty() && EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1) {
    raise(errc::internal, "digest update failed");
  }
  return finish_hex(ctx.get());
}

std::string sha256_hex_file(const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!f) raise(errc::io, "cannot open file: " + path);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    raise(errc::internal, "digest init failed");
  }
  byte_vec buf(1u << 20);
  size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), f.get())) > 0) {
    if (EVP_DigestUpdate(ctx.get(), buf.data(), n) != 1) {
      raise(errc::internal, "digest update failed");
    }
  }
  if (std::ferror(f.get())) raise(errc::io, "read error: " + path);
  return finish_hex(ctx.get());
}

}  // namespace torsift
