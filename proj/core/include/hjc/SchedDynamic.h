//===- SchedDynamic.h - Elastic (handshake) circuit construction -*- C++ -*-=//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#ifndef HJC_SCHEDDYNAMIC_H
#define HJC_SCHEDDYNAMIC_H

#include "hjc/IR.h"

namespace hjc {

/// Lowers a core-level module to a handshake-level dataflow graph: one
/// subgraph per block, a control merge plus per-argument muxes at block
/// joins, a cbranch per live-out value at conditional branches, and a fork
/// for every multi-use channel. Memory accesses get a control-token trigger
/// but are not yet ordered (see threadMemoryTokens) and loop channels are
/// not yet buffered (see insertBuffers).
ir::IrModule buildHandshake(const ir::IrModule &module);

/// Serializes accesses to each array: ordering tokens chain through the
/// accesses of a block in program order, and a block's outgoing control
/// token joins with the last token of every array the block touches, so no
/// two accesses to one array are ever in flight simultaneously.
void threadMemoryTokens(ir::IrModule &module);

/// Places an opaque+transparent buffer pair on every channel that crosses a
/// CFG back-edge (computed by DFS from the entry block with ascending block
/// order). Idempotent.
void insertBuffers(ir::IrModule &module);

/// buildHandshake + threadMemoryTokens + insertBuffers.
ir::IrModule lowerToHandshake(const ir::IrModule &module);

} // namespace hjc

#endif // HJC_SCHEDDYNAMIC_H
