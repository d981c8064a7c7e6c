#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sshlight/kern/kernels.hpp"

namespace sshlight::kern {
namespace {

const Ops* lookup(const char* name) {
  if (name == nullptr) return nullptr;
  if (std::strcmp(name, "scalar") == 0) return &scalar_ops();
  if (std::strcmp(name, "avx2") == 0) return avx2_ops();
  if (std::strcmp(name, "neon") == 0) return neon_ops();
  return nullptr;
}

const Ops* select_default() {
  if (const Ops* env = lookup(std::getenv("SSHLIGHT_KERNEL"))) return env;
  if (const Ops* v = avx2_ops()) return v;
  if (const Ops* v = neon_ops()) return v;
  return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = select_default();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool force_active(const char* name) {
  const Ops* ops = lookup(name);
  if (ops == nullptr) return false;
  g_active.store(ops, std::memory_order_release);
  return true;
}

}  // namespace sshlight::kern
