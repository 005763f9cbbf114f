//===- Interp.cpp - Reference interpreter for core-level IR ---------------===//
//
// Part of the hjc project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "hjc/Interp.h"

#include "hjc/Dialect.h"
#include "hjc/Eval.h"

#include <map>
#include <stdexcept>

namespace hjc {

using namespace ir;

namespace {

struct Trap {
  std::string kind;
};

struct Machine {
  const IrModule &module;
  int64_t fuel;
  int64_t opsExecuted = 0;
  int64_t blocksExecuted = 0;

  int64_t run(const IrFunction &fn, const std::vector<int64_t> &args) {
    std::vector<int64_t> vals(fn.valueTypes.size(), 0);
    // Array storage keyed by the alloc result value.
    std::map<ValueId, std::vector<int64_t>> arrays;

    for (size_t i = 0; i < args.size(); ++i)
      vals[(size_t)fn.blocks[0].args[i]] =
          fn.typeOf(fn.blocks[0].args[i]).wrap(args[i]);

    int block = 0;
    for (;;) {
      ++blocksExecuted;
      for (const Operation &op : fn.blocks[(size_t)block].ops) {
        if (++opsExecuted > fuel)
          throw Trap{"FuelExhausted"};

        if (op.opcode == "core.return")
          return vals[(size_t)op.operands[0]];
        if (op.opcode == "core.br" || op.opcode == "core.condbr") {
          const Successor &s =
              op.opcode == "core.br"
                  ? op.successors[0]
                  : op.successors[vals[(size_t)op.operands[0]] != 0 ? 0 : 1];
          std::vector<int64_t> passed;
          passed.reserve(s.args.size());
          for (ValueId a : s.args)
            passed.push_back(vals[(size_t)a]);
          block = s.block;
          const auto &targetArgs = fn.blocks[(size_t)block].args;
          for (size_t i = 0; i < targetArgs.size(); ++i)
            vals[(size_t)targetArgs[i]] = passed[i];
          break;
        }

        if (op.opcode == "core.const") {
          vals[(size_t)op.results[0]] =
              fn.typeOf(op.results[0]).wrap(op.intAttr("value"));
          continue;
        }
        if (op.opcode == "core.array.alloc") {
          HwType t = fn.typeOf(op.results[0]);
          arrays[op.results[0]] =
              std::vector<int64_t>(t.arrayLength(), 0);
          continue;
        }
        if (op.opcode == "core.array.read") {
          HwType arrType = fn.typeOf(op.operands[0]);
          uint64_t idx =
              fn.typeOf(op.operands[1]).bits(vals[(size_t)op.operands[1]]);
          if (idx >= arrType.arrayLength())
            throw Trap{"OutOfBoundsIndex"};
          vals[(size_t)op.results[0]] = arrays.at(op.operands[0])[idx];
          continue;
        }
        if (op.opcode == "core.array.write") {
          HwType arrType = fn.typeOf(op.operands[0]);
          uint64_t idx =
              fn.typeOf(op.operands[1]).bits(vals[(size_t)op.operands[1]]);
          if (idx >= arrType.arrayLength())
            throw Trap{"OutOfBoundsIndex"};
          arrays.at(op.operands[0])[idx] =
              arrType.elementType().wrap(vals[(size_t)op.operands[2]]);
          continue;
        }
        if (op.opcode == "core.call") {
          const IrFunction *callee = module.find(op.strAttr("callee"));
          if (!callee)
            throw std::logic_error("call to unknown function '" +
                                   op.strAttr("callee") + "'");
          std::vector<int64_t> callArgs;
          for (ValueId o : op.operands)
            callArgs.push_back(vals[(size_t)o]);
          vals[(size_t)op.results[0]] = run(*callee, callArgs);
          continue;
        }

        std::string kind = coreOpToDatapathKind(op.opcode);
        if (kind.empty())
          throw std::logic_error("interpreter: unsupported opcode '" +
                                 op.opcode + "'");
        std::vector<int64_t> inputs;
        std::vector<HwType> inputTypes;
        for (ValueId o : op.operands) {
          inputs.push_back(vals[(size_t)o]);
          inputTypes.push_back(fn.typeOf(o));
        }
        vals[(size_t)op.results[0]] = evalOperator(
            kind, inputs, fn.typeOf(op.results[0]), inputTypes);
      }
    }
  }
};

} // namespace

InterpResult interpret(const ir::IrModule &module, const std::string &entry,
                       const std::vector<int64_t> &args, int64_t fuel) {
  const IrFunction *fn = module.find(entry);
  if (!fn)
    throw std::logic_error("interpret: no function named '" + entry + "'");

  Machine m{module, fuel};
  InterpResult r;
  try {
    r.value = m.run(*fn, args);
  } catch (const Trap &t) {
    r.trapped = true;
    r.trapKind = t.kind;
  }
  r.opsExecuted = m.opsExecuted;
  r.blocksExecuted = m.blocksExecuted;
  return r;
}

} // namespace hjc
