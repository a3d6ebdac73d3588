//! Tree-walking interpreter for MiniC, used as the semantics oracle.
//!
//! Semantics in brief: integers are two's-complement values of the
//! declared width and wrap on store and on arithmetic in the promoted
//! width (at least 32 bits); `float` and `double` are both IEEE f64;
//! `input`/`scan` read whitespace-separated tokens from a single input
//! text and `output`/`print` append to a single output buffer —
//! `fopenin`/`fopenout`/`syncio`/`fixed` are stylistic markers that do
//! not change behavior. Reference parameters use copy-in/copy-out.
//! Every evaluated node costs one unit of fuel.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;

const MAX_CALL_DEPTH: usize = 256;

/// Default interpreter fuel: generous for contest-scale programs while
/// keeping the oracle bounded.
pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramOutput {
    pub stdout_text: String,
    pub exit_code: i32,
    pub steps_used: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InterpError {
    Runtime(String),
    FuelExhausted,
}

impl fmt::Display for InterpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpError::Runtime(m) => write!(f, "runtime error: {m}"),
            InterpError::FuelExhausted => write!(f, "fuel exhausted"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Width {
    W8,
    W16,
    W32,
    W64,
}

impl Width {
    fn wrap(self, v: i64) -> i64 {
        match self {
            Width::W8 => v as i8 as i64,
            Width::W16 => v as i16 as i64,
            Width::W32 => v as i32 as i64,
            Width::W64 => v,
        }
    }

    fn max(self, other: Width) -> Width {
        use Width::*;
        match (self, other) {
            (W64, _) | (_, W64) => W64,
            (W32, _) | (_, W32) => W32,
            (W16, _) | (_, W16) => W16,
            _ => W8,
        }
    }
}

fn width_of(s: ScalarTy) -> Width {
    match s {
        ScalarTy::Bool | ScalarTy::Char => Width::W8,
        ScalarTy::Short => Width::W16,
        ScalarTy::Int => Width::W32,
        ScalarTy::Long | ScalarTy::LongLong => Width::W64,
        _ => Width::W64,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int { v: i64, w: Width },
    Float(f64),
    Bool(bool),
    Char(u8),
    Str(Vec<u8>),
    /// Fixed-capacity char buffer holding a NUL-terminated string.
    CharArr(Vec<u8>),
    Arr { elem: ScalarTy, data: Vec<Value> },
    VecArr { elem: ScalarTy, data: Vec<Value> },
    Unit,
}

impl Value {
    fn truthy(&self) -> Result<bool, InterpError> {
        match self {
            Value::Int { v, .. } => Ok(*v != 0),
            Value::Bool(b) => Ok(*b),
            Value::Char(c) => Ok(*c != 0),
            Value::Float(f) => Ok(*f != 0.0),
            _ => Err(InterpError::Runtime("value is not usable as a condition".to_string())),
        }
    }

    fn zero_scalar(s: ScalarTy) -> Value {
        match s {
            ScalarTy::Bool => Value::Bool(false),
            ScalarTy::Char => Value::Char(0),
            ScalarTy::Float | ScalarTy::Double => Value::Float(0.0),
            ScalarTy::Str => Value::Str(Vec::new()),
            ScalarTy::Void => Value::Unit,
            s => Value::Int { v: 0, w: width_of(s) },
        }
    }
}

/// Convert a value for storage into a slot of scalar type `dst`.
fn convert(dst: ScalarTy, value: Value) -> Result<Value, InterpError> {
    let out = match (dst, value) {
        (ScalarTy::Bool, v) => Value::Bool(v.truthy()?),
        (ScalarTy::Char, Value::Int { v, .. }) => Value::Char(v as u8),
        (ScalarTy::Char, Value::Char(c)) => Value::Char(c),
        (ScalarTy::Char, Value::Bool(b)) => Value::Char(b as u8),
        (ScalarTy::Char, Value::Float(f)) => Value::Char(f as i64 as u8),
        (s, Value::Int { v, .. }) if s.is_integral() => Value::Int { v: width_of(s).wrap(v), w: width_of(s) },
        (s, Value::Bool(b)) if s.is_integral() => Value::Int { v: b as i64, w: width_of(s) },
        (s, Value::Char(c)) if s.is_integral() => {
            Value::Int { v: c as i8 as i64, w: width_of(s) }
        }
        (s, Value::Float(f)) if s.is_integral() => {
            Value::Int { v: width_of(s).wrap(f as i64), w: width_of(s) }
        }
        (ScalarTy::Float | ScalarTy::Double, Value::Float(f)) => Value::Float(f),
        (ScalarTy::Float | ScalarTy::Double, Value::Int { v, .. }) => Value::Float(v as f64),
        (ScalarTy::Float | ScalarTy::Double, Value::Char(c)) => Value::Float(c as i8 as f64),
        (ScalarTy::Float | ScalarTy::Double, Value::Bool(b)) => Value::Float(b as i64 as f64),
        (ScalarTy::Str, Value::Str(b)) => Value::Str(b),
        (ScalarTy::Str, Value::CharArr(b)) => Value::Str(cstr(&b).to_vec()),
        (ScalarTy::Str, Value::Char(c)) => Value::Str(alloc::vec![c]),
        (d, v) => {
            return Err(InterpError::Runtime(format!(
                "cannot convert {v:?} to {}",
                d.keyword()
            )))
        }
    };
    Ok(out)
}

fn cstr(bytes: &[u8]) -> &[u8] {
    match bytes.iter().position(|&b| b == 0) {
        Some(n) => &bytes[..n],
        None => bytes,
    }
}

struct Scope {
    vars: BTreeMap<String, (ScalarTy, Value, Option<i64>)>,
}

struct Frame {
    scopes: Vec<Scope>,
}

struct Interp<'a> {
    ast: &'a Ast,
    globals: Scope,
    frames: Vec<Frame>,
    input: &'a [u8],
    input_pos: usize,
    out: String,
    precision: usize,
    fuel: u64,
    steps: u64,
}

enum Flow {
    Normal,
    Return(Value),
}

/// Run a program's `main` on the given input text.
pub fn interpret(
    program: &SourceProgram,
    stdin_text: &str,
    fuel: u64,
) -> Result<ProgramOutput, InterpError> {
    let main = program
        .ast
        .find_func("main")
        .ok_or_else(|| InterpError::Runtime("program has no main function".to_string()))?;
    if !main.params.is_empty() {
        return Err(InterpError::Runtime("main must take no parameters".to_string()));
    }
    let mut it = Interp {
        ast: &program.ast,
        globals: Scope { vars: BTreeMap::new() },
        frames: Vec::new(),
        input: stdin_text.as_bytes(),
        input_pos: 0,
        out: String::new(),
        precision: 6,
        fuel,
        steps: 0,
    };
    it.init_globals()?;
    let ret = it.call_func(main, Vec::new())?;
    let exit_code = match ret {
        Value::Int { v, .. } => v as i32,
        Value::Unit => 0,
        Value::Bool(b) => b as i32,
        Value::Char(c) => c as i32,
        _ => 0,
    };
    Ok(ProgramOutput { stdout_text: it.out, exit_code, steps_used: it.steps })
}

impl<'a> Interp<'a> {
    fn tick(&mut self) -> Result<(), InterpError> {
        self.steps += 1;
        if self.steps > self.fuel {
            self.steps = self.fuel;
            return Err(InterpError::FuelExhausted);
        }
        Ok(())
    }

    fn rt(&self, msg: impl Into<String>) -> InterpError {
        InterpError::Runtime(msg.into())
    }

    fn concrete(&self, kind: &TyKind) -> Result<(ScalarTy, bool), InterpError> {
        // Returns (scalar, is_vec). Aliases resolve through the typedef
        // items of the same tree.
        match kind {
            TyKind::Scalar(s) => Ok((*s, false)),
            TyKind::Vec(e) => {
                let (s, v) = self.concrete(e)?;
                if v {
                    return Err(self.rt("nested vec"));
                }
                Ok((s, true))
            }
            TyKind::Named(n) => {
                for item in &self.ast.items {
                    if let Item::Typedef(t) = item {
                        if &t.alias == n {
                            return self.concrete(&t.ty.kind);
                        }
                    }
                }
                Err(self.rt(format!("unknown type alias {n}")))
            }
        }
    }

    fn init_globals(&mut self) -> Result<(), InterpError> {
        let items = self.ast.items.clone();
        for item in &items {
            if let Item::Global(g) = item {
                let value = self.initial_value(&g.decl)?;
                let (s, _) = self.concrete(&g.decl.ty.kind)?;
                self.globals.vars.insert(g.decl.name.clone(), (s, value, g.decl.array_len));
            }
        }
        Ok(())
    }

    fn initial_value(&mut self, decl: &VarDecl) -> Result<Value, InterpError> {
        let (s, is_vec) = self.concrete(&decl.ty.kind)?;
        if let Some(n) = decl.array_len {
            return Ok(if s == ScalarTy::Char {
                Value::CharArr(alloc::vec![0; n as usize])
            } else {
                Value::Arr { elem: s, data: alloc::vec![Value::zero_scalar(s); n as usize] }
            });
        }
        if is_vec {
            let len = match &decl.ctor_arg {
                Some(e) => {
                    let v = self.eval(e)?;
                    match v {
                        Value::Int { v, .. } => {
                            if !(0..=10_000_000).contains(&v) {
                                return Err(self.rt("vec size out of range"));
                            }
                            v as usize
                        }
                        _ => return Err(self.rt("vec size must be an integer")),
                    }
                }
                None => 0,
            };
            return Ok(Value::VecArr { elem: s, data: alloc::vec![Value::zero_scalar(s); len] });
        }
        match &decl.init {
            Some(e) => {
                let v = self.eval(e)?;
                convert(s, v)
            }
            None => Ok(Value::zero_scalar(s)),
        }
    }

    /// Call a function. Returns the return value and, for every
    /// reference parameter, its final value for copy-out at the call
    /// site.
    fn call_func_full(
        &mut self,
        func: &'a FuncDecl,
        args: Vec<Value>,
    ) -> Result<(Value, Vec<Option<Value>>), InterpError> {
        if self.frames.len() >= MAX_CALL_DEPTH {
            return Err(self.rt("call depth exceeded"));
        }
        let mut scope = Scope { vars: BTreeMap::new() };
        for (p, a) in func.params.iter().zip(args) {
            let (s, is_vec) = self.concrete(&p.ty.kind)?;
            let v = if is_vec || matches!(a, Value::Arr { .. } | Value::CharArr(_) | Value::VecArr { .. }) {
                a
            } else {
                convert(s, a)?
            };
            scope.vars.insert(p.name.clone(), (s, v, None));
        }
        self.frames.push(Frame { scopes: alloc::vec![scope] });
        let flow = self.exec_block(&func.body);
        let mut frame = self.frames.pop().expect("frame");
        let flow = flow?;
        let param_scope = &mut frame.scopes[0];
        let mut outs = Vec::with_capacity(func.params.len());
        for p in &func.params {
            if p.by_ref {
                outs.push(param_scope.vars.remove(&p.name).map(|(_, v, _)| v));
            } else {
                outs.push(None);
            }
        }
        let (ret_s, _) = self.concrete(&func.ret.kind)?;
        let ret = match flow {
            Flow::Return(v) => {
                if ret_s == ScalarTy::Void {
                    Value::Unit
                } else if matches!(v, Value::Arr { .. } | Value::VecArr { .. } | Value::Str(_) | Value::CharArr(_))
                {
                    v
                } else {
                    convert(ret_s, v)?
                }
            }
            Flow::Normal => Value::zero_scalar(ret_s),
        };
        Ok((ret, outs))
    }

    fn call_func(&mut self, func: &'a FuncDecl, args: Vec<Value>) -> Result<Value, InterpError> {
        Ok(self.call_func_full(func, args)?.0)
    }

    fn exec_block(&mut self, block: &'a Block) -> Result<Flow, InterpError> {
        self.frames.last_mut().expect("frame").scopes.push(Scope { vars: BTreeMap::new() });
        let mut flow = Flow::Normal;
        for s in &block.stmts {
            match self.exec_stmt(s)? {
                Flow::Normal => {}
                ret => {
                    flow = ret;
                    break;
                }
            }
        }
        self.frames.last_mut().expect("frame").scopes.pop();
        Ok(flow)
    }

    fn exec_stmt(&mut self, s: &'a Stmt) -> Result<Flow, InterpError> {
        self.tick()?;
        match s {
            Stmt::Decl { decl, .. } => {
                let value = self.initial_value(decl)?;
                let (sc, _) = self.concrete(&decl.ty.kind)?;
                self.frames
                    .last_mut()
                    .expect("frame")
                    .scopes
                    .last_mut()
                    .expect("scope")
                    .vars
                    .insert(decl.name.clone(), (sc, value, decl.array_len));
                Ok(Flow::Normal)
            }
            Stmt::Expr { expr, .. } => {
                self.eval(expr)?;
                Ok(Flow::Normal)
            }
            Stmt::If { cond, then_branch, else_branch, .. } => {
                let c = self.eval(cond)?.truthy().map_err(|_| self.rt("bad if condition"))?;
                if c {
                    self.exec_scoped(then_branch)
                } else if let Some(e) = else_branch {
                    self.exec_scoped(e)
                } else {
                    Ok(Flow::Normal)
                }
            }
            Stmt::While { cond, body, .. } => {
                loop {
                    self.tick()?;
                    if !self.eval(cond)?.truthy().map_err(|_| self.rt("bad while condition"))? {
                        break;
                    }
                    match self.exec_scoped(body)? {
                        Flow::Normal => {}
                        ret => return Ok(ret),
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::For { init, cond, step, body, .. } => {
                self.frames.last_mut().expect("frame").scopes.push(Scope { vars: BTreeMap::new() });
                let result = (|| {
                    if let Some(i) = init {
                        self.exec_stmt(i)?;
                    }
                    loop {
                        self.tick()?;
                        if let Some(c) = cond {
                            if !self.eval(c)?.truthy().map_err(|_| self.rt("bad for condition"))? {
                                break;
                            }
                        }
                        match self.exec_scoped(body)? {
                            Flow::Normal => {}
                            ret => return Ok(ret),
                        }
                        if let Some(st) = step {
                            self.eval(st)?;
                        }
                    }
                    Ok(Flow::Normal)
                })();
                self.frames.last_mut().expect("frame").scopes.pop();
                result
            }
            Stmt::Return { value, .. } => {
                let v = match value {
                    Some(e) => self.eval(e)?,
                    None => Value::Unit,
                };
                Ok(Flow::Return(v))
            }
            Stmt::Block { block, .. } => self.exec_block(block),
            Stmt::StreamIn { targets, .. } => {
                for t in targets {
                    let shape = self.lvalue_scalar(t)?;
                    let v = self.read_token_as(shape)?;
                    self.store(t, v)?;
                }
                Ok(Flow::Normal)
            }
            Stmt::StreamOut { items, .. } => {
                for i in items {
                    let v = self.eval(i)?;
                    let text = self.display(&v)?;
                    self.out.push_str(&text);
                }
                Ok(Flow::Normal)
            }
            Stmt::Precision { kind, .. } => {
                if let PrecisionKind::SetPrec(e) = kind {
                    match self.eval(e)? {
                        Value::Int { v, .. } if (0..=17).contains(&v) => self.precision = v as usize,
                        Value::Int { .. } => return Err(self.rt("precision out of range")),
                        _ => return Err(self.rt("precision must be an integer")),
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::SyncIo { .. } => Ok(Flow::Normal),
        }
    }

    /// Execute a statement that syntactically owns its own scope when
    /// it is a bare (non-compound) control body.
    fn exec_scoped(&mut self, s: &'a Stmt) -> Result<Flow, InterpError> {
        match s {
            Stmt::Block { block, .. } => self.exec_block(block),
            _ => {
                self.frames.last_mut().expect("frame").scopes.push(Scope { vars: BTreeMap::new() });
                let r = self.exec_stmt(s);
                self.frames.last_mut().expect("frame").scopes.pop();
                r
            }
        }
    }

    fn find_var(&mut self, name: &str) -> Option<&mut (ScalarTy, Value, Option<i64>)> {
        if let Some(frame) = self.frames.last_mut() {
            for scope in frame.scopes.iter_mut().rev() {
                if scope.vars.contains_key(name) {
                    return scope.vars.get_mut(name);
                }
            }
        }
        self.globals.vars.get_mut(name)
    }

    fn lvalue_scalar(&mut self, e: &Expr) -> Result<ScalarTy, InterpError> {
        match e {
            Expr::Var { name, .. } => {
                let (s, v, _) =
                    self.find_var(name).ok_or_else(|| InterpError::Runtime(format!("unknown variable {name}")))?;
                Ok(match v {
                    Value::Str(_) => ScalarTy::Str,
                    Value::CharArr(_) => ScalarTy::Str,
                    _ => *s,
                })
            }
            Expr::Index { base, .. } => {
                let base_s = self.lvalue_scalar(base)?;
                Ok(if base_s == ScalarTy::Str { ScalarTy::Char } else { base_s })
            }
            _ => Err(self.rt("not a readable target")),
        }
    }

    fn read_token(&mut self) -> Option<&'a [u8]> {
        while self.input_pos < self.input.len() && self.input[self.input_pos].is_ascii_whitespace()
        {
            self.input_pos += 1;
        }
        if self.input_pos >= self.input.len() {
            return None;
        }
        let start = self.input_pos;
        while self.input_pos < self.input.len() && !self.input[self.input_pos].is_ascii_whitespace()
        {
            self.input_pos += 1;
        }
        Some(&self.input[start..self.input_pos])
    }

    fn read_token_as(&mut self, s: ScalarTy) -> Result<Value, InterpError> {
        match s {
            ScalarTy::Char => {
                while self.input_pos < self.input.len()
                    && self.input[self.input_pos].is_ascii_whitespace()
                {
                    self.input_pos += 1;
                }
                if self.input_pos >= self.input.len() {
                    return Err(self.rt("input exhausted"));
                }
                let c = self.input[self.input_pos];
                self.input_pos += 1;
                Ok(Value::Char(c))
            }
            ScalarTy::Str => {
                let tok = self.read_token().ok_or_else(|| InterpError::Runtime("input exhausted".to_string()))?;
                Ok(Value::Str(tok.to_vec()))
            }
            ScalarTy::Float | ScalarTy::Double => {
                let tok = self.read_token().ok_or_else(|| InterpError::Runtime("input exhausted".to_string()))?;
                let text = core::str::from_utf8(tok).map_err(|_| InterpError::Runtime("bad float input".to_string()))?;
                let v: f64 = text.parse().map_err(|_| InterpError::Runtime("bad float input".to_string()))?;
                Ok(Value::Float(v))
            }
            s if s.is_integral() => {
                let tok = self.read_token().ok_or_else(|| InterpError::Runtime("input exhausted".to_string()))?;
                let text = core::str::from_utf8(tok).map_err(|_| InterpError::Runtime("bad integer input".to_string()))?;
                let v: i64 = text.parse().map_err(|_| InterpError::Runtime("bad integer input".to_string()))?;
                Ok(Value::Int { v, w: Width::W64 })
            }
            _ => Err(self.rt("cannot read into this target")),
        }
    }

    fn display(&self, v: &Value) -> Result<String, InterpError> {
        Ok(match v {
            Value::Int { v, .. } => format!("{v}"),
            Value::Bool(b) => format!("{}", *b as i32),
            Value::Char(c) => (*c as char).to_string(),
            Value::Float(f) => format!("{:.*}", self.precision, f),
            Value::Str(b) => String::from_utf8_lossy(b).to_string(),
            Value::CharArr(b) => String::from_utf8_lossy(cstr(b)).to_string(),
            _ => return Err(InterpError::Runtime("cannot print aggregate value".to_string())),
        })
    }

    /// Store into an lvalue, applying the slot's conversion. Returns
    /// the value actually stored.
    fn store(&mut self, target: &Expr, value: Value) -> Result<Value, InterpError> {
        match target {
            Expr::Var { name, .. } => {
                let rt_err = InterpError::Runtime(format!("unknown variable {name}"));
                // Compute conversions based on the slot's current shape.
                let slot = self.find_var(name).ok_or(rt_err)?;
                let converted = match &slot.1 {
                    Value::Str(_) => convert(ScalarTy::Str, value)?,
                    Value::CharArr(buf) => {
                        let cap = buf.len();
                        let src: Vec<u8> = match value {
                            Value::Str(b) => b,
                            Value::CharArr(b) => cstr(&b).to_vec(),
                            _ => return Err(InterpError::Runtime("cannot store into char array".to_string())),
                        };
                        if src.len() + 1 > cap {
                            return Err(InterpError::Runtime("char array overflow".to_string()));
                        }
                        let mut buf = alloc::vec![0; cap];
                        buf[..src.len()].copy_from_slice(&src);
                        Value::CharArr(buf)
                    }
                    Value::Arr { .. } | Value::VecArr { .. } => {
                        match (&slot.1, &value) {
                            (Value::Arr { elem: a, data: d1 }, Value::Arr { elem: b, data: d2 })
                                if a == b && d1.len() == d2.len() =>
                            {
                                value
                            }
                            (Value::VecArr { elem: a, .. }, Value::VecArr { elem: b, .. }) if a == b => value,
                            _ => return Err(InterpError::Runtime("incompatible aggregate assignment".to_string())),
                        }
                    }
                    _ => convert(slot.0, value)?,
                };
                slot.1 = converted.clone();
                Ok(converted)
            }
            Expr::Index { base, index, .. } => {
                let idx = match self.eval(index)? {
                    Value::Int { v, .. } => v,
                    Value::Char(c) => c as i64,
                    _ => return Err(self.rt("index must be an integer")),
                };
                let Expr::Var { name, .. } = &**base else {
                    return Err(self.rt("unsupported index target"));
                };
                let name = name.clone();
                let elem_converted = {
                    let slot = self
                        .find_var(&name)
                        .ok_or_else(|| InterpError::Runtime(format!("unknown variable {name}")))?;
                    match &slot.1 {
                        Value::Arr { elem, .. } | Value::VecArr { elem, .. } => convert(*elem, value)?,
                        Value::CharArr(_) | Value::Str(_) => convert(ScalarTy::Char, value)?,
                        _ => return Err(InterpError::Runtime("indexing a non-array".to_string())),
                    }
                };
                let slot = self
                    .find_var(&name)
                    .ok_or_else(|| InterpError::Runtime(format!("unknown variable {name}")))?;
                match &mut slot.1 {
                    Value::Arr { data, .. } | Value::VecArr { data, .. } => {
                        if idx < 0 || idx as usize >= data.len() {
                            return Err(InterpError::Runtime("index out of bounds".to_string()));
                        }
                        data[idx as usize] = elem_converted.clone();
                    }
                    Value::CharArr(buf) => {
                        if idx < 0 || idx as usize >= buf.len() {
                            return Err(InterpError::Runtime("index out of bounds".to_string()));
                        }
                        let Value::Char(c) = elem_converted else { unreachable!() };
                        buf[idx as usize] = c;
                    }
                    Value::Str(bytes) => {
                        if idx < 0 || idx as usize >= bytes.len() {
                            return Err(InterpError::Runtime("index out of bounds".to_string()));
                        }
                        let Value::Char(c) = elem_converted else { unreachable!() };
                        bytes[idx as usize] = c;
                    }
                    _ => return Err(InterpError::Runtime("indexing a non-array".to_string())),
                }
                Ok(elem_converted)
            }
            _ => Err(self.rt("assignment target is not assignable")),
        }
    }

    fn load(&mut self, e: &Expr) -> Result<Value, InterpError> {
        match e {
            Expr::Var { name, .. } => {
                let slot = self
                    .find_var(name)
                    .ok_or_else(|| InterpError::Runtime(format!("unknown variable {name}")))?;
                Ok(slot.1.clone())
            }
            Expr::Index { base, index, .. } => {
                let idx = match self.eval(index)? {
                    Value::Int { v, .. } => v,
                    Value::Char(c) => c as i64,
                    _ => return Err(self.rt("index must be an integer")),
                };
                let b = self.load(base)?;
                match b {
                    Value::Arr { data, .. } | Value::VecArr { data, .. } => {
                        if idx < 0 || idx as usize >= data.len() {
                            return Err(self.rt("index out of bounds"));
                        }
                        Ok(data[idx as usize].clone())
                    }
                    Value::CharArr(buf) => {
                        if idx < 0 || idx as usize >= buf.len() {
                            return Err(self.rt("index out of bounds"));
                        }
                        Ok(Value::Char(buf[idx as usize]))
                    }
                    Value::Str(bytes) => {
                        if idx < 0 || idx as usize >= bytes.len() {
                            return Err(self.rt("index out of bounds"));
                        }
                        Ok(Value::Char(bytes[idx as usize]))
                    }
                    _ => Err(self.rt("indexing a non-array")),
                }
            }
            _ => self.eval(e),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, InterpError> {
        self.tick()?;
        match e {
            Expr::Literal { lit, .. } => Ok(match lit {
                Lit::Int(v) => {
                    let w = if *v > i32::MAX as i64 || *v < i32::MIN as i64 {
                        Width::W64
                    } else {
                        Width::W32
                    };
                    Value::Int { v: *v, w }
                }
                Lit::Float(f) => Value::Float(*f),
                Lit::Str(b) => Value::Str(b.clone()),
                Lit::Char(c) => Value::Char(*c),
                Lit::Bool(b) => Value::Bool(*b),
            }),
            Expr::Var { .. } | Expr::Index { .. } => self.load(e),
            Expr::Bin { op, lhs, rhs, .. } => self.eval_bin(*op, lhs, rhs),
            Expr::Un { op, operand, .. } => self.eval_un(*op, operand),
            Expr::Assign { op, target, value, .. } => {
                let rhs = self.eval(value)?;
                let stored = match op {
                    AssignOp::Set => rhs,
                    other => {
                        let old = self.load(target)?;
                        let bin = match other {
                            AssignOp::Add => BinOpKind::Add,
                            AssignOp::Sub => BinOpKind::Sub,
                            AssignOp::Mul => BinOpKind::Mul,
                            AssignOp::Div => BinOpKind::Div,
                            AssignOp::Rem => BinOpKind::Rem,
                            AssignOp::Set => unreachable!(),
                        };
                        self.arith(bin, old, rhs)?
                    }
                };
                self.store(target, stored)
            }
            Expr::Call { callee, args, .. } => self.eval_call(callee, args),
        }
    }

    fn eval_un(&mut self, op: UnOpKind, operand: &Expr) -> Result<Value, InterpError> {
        match op {
            UnOpKind::Neg => {
                let v = self.eval(operand)?;
                match v {
                    Value::Int { v, w } => {
                        let w = w.max(Width::W32);
                        Ok(Value::Int { v: w.wrap(v.wrapping_neg()), w })
                    }
                    Value::Float(f) => Ok(Value::Float(-f)),
                    Value::Char(c) => Ok(Value::Int { v: -(c as i8 as i64), w: Width::W32 }),
                    Value::Bool(b) => Ok(Value::Int { v: -(b as i64), w: Width::W32 }),
                    _ => Err(self.rt("cannot negate value")),
                }
            }
            UnOpKind::Not => {
                let v = self.eval(operand)?;
                Ok(Value::Bool(!v.truthy().map_err(|_| self.rt("cannot apply ! to value"))?))
            }
            UnOpKind::PreInc | UnOpKind::PreDec | UnOpKind::PostInc | UnOpKind::PostDec => {
                let old = self.load(operand)?;
                let delta = if matches!(op, UnOpKind::PreInc | UnOpKind::PostInc) { 1 } else { -1 };
                let new = self.arith(BinOpKind::Add, old.clone(), Value::Int { v: delta, w: Width::W32 })?;
                let stored = self.store(operand, new)?;
                Ok(match op {
                    UnOpKind::PostInc | UnOpKind::PostDec => old,
                    _ => stored,
                })
            }
            UnOpKind::AddrOf => Err(self.rt("`&` outside scan")),
        }
    }

    fn arith(&self, op: BinOpKind, a: Value, b: Value) -> Result<Value, InterpError> {
        use BinOpKind::*;
        // Promote char/bool to int width; float dominates.
        fn num(v: &Value) -> Option<(i64, Width, bool, f64)> {
            match v {
                Value::Int { v, w } => Some((*v, *w, false, *v as f64)),
                Value::Char(c) => Some((*c as i8 as i64, Width::W32, false, *c as i8 as f64)),
                Value::Bool(b) => Some((*b as i64, Width::W32, false, *b as i64 as f64)),
                Value::Float(f) => Some((0, Width::W64, true, *f)),
                _ => None,
            }
        }
        // String-ish equality/relational compare by content.
        let str_bytes = |v: &Value| -> Option<Vec<u8>> {
            match v {
                Value::Str(b) => Some(b.clone()),
                Value::CharArr(b) => Some(cstr(b).to_vec()),
                _ => None,
            }
        };
        if let (Some(x), Some(y)) = (str_bytes(&a), str_bytes(&b)) {
            return Ok(match op {
                Eq => Value::Bool(x == y),
                Ne => Value::Bool(x != y),
                Lt => Value::Bool(x < y),
                Le => Value::Bool(x <= y),
                Gt => Value::Bool(x > y),
                Ge => Value::Bool(x >= y),
                Add => {
                    let mut out = x;
                    out.extend_from_slice(&y);
                    Value::Str(out)
                }
                _ => return Err(self.rt("unsupported string operation")),
            });
        }
        let (av, aw, afl, af) = num(&a).ok_or_else(|| self.rt("non-numeric operand"))?;
        let (bv, bw, bfl, bf) = num(&b).ok_or_else(|| self.rt("non-numeric operand"))?;
        if afl || bfl {
            let (x, y) = (if afl { af } else { av as f64 }, if bfl { bf } else { bv as f64 });
            return Ok(match op {
                Add => Value::Float(x + y),
                Sub => Value::Float(x - y),
                Mul => Value::Float(x * y),
                Div => {
                    if y == 0.0 {
                        return Err(self.rt("division by zero"));
                    }
                    Value::Float(x / y)
                }
                Rem => return Err(self.rt("% on floats")),
                Lt => Value::Bool(x < y),
                Le => Value::Bool(x <= y),
                Gt => Value::Bool(x > y),
                Ge => Value::Bool(x >= y),
                Eq => Value::Bool(x == y),
                Ne => Value::Bool(x != y),
                And | Or => unreachable!("short-circuit handled in eval_bin"),
            });
        }
        let w = aw.max(bw).max(Width::W32);
        let (x, y) = (av, bv);
        Ok(match op {
            Add => Value::Int { v: w.wrap(x.wrapping_add(y)), w },
            Sub => Value::Int { v: w.wrap(x.wrapping_sub(y)), w },
            Mul => Value::Int { v: w.wrap(x.wrapping_mul(y)), w },
            Div => {
                if y == 0 {
                    return Err(self.rt("division by zero"));
                }
                Value::Int { v: w.wrap(x.wrapping_div(y)), w }
            }
            Rem => {
                if y == 0 {
                    return Err(self.rt("division by zero"));
                }
                Value::Int { v: w.wrap(x.wrapping_rem(y)), w }
            }
            Lt => Value::Bool(x < y),
            Le => Value::Bool(x <= y),
            Gt => Value::Bool(x > y),
            Ge => Value::Bool(x >= y),
            Eq => Value::Bool(x == y),
            Ne => Value::Bool(x != y),
            And | Or => unreachable!("short-circuit handled in eval_bin"),
        })
    }

    fn eval_bin(&mut self, op: BinOpKind, lhs: &Expr, rhs: &Expr) -> Result<Value, InterpError> {
        match op {
            BinOpKind::And => {
                let l = self.eval(lhs)?.truthy().map_err(|_| self.rt("bad && operand"))?;
                if !l {
                    return Ok(Value::Bool(false));
                }
                let r = self.eval(rhs)?.truthy().map_err(|_| self.rt("bad && operand"))?;
                Ok(Value::Bool(r))
            }
            BinOpKind::Or => {
                let l = self.eval(lhs)?.truthy().map_err(|_| self.rt("bad || operand"))?;
                if l {
                    return Ok(Value::Bool(true));
                }
                let r = self.eval(rhs)?.truthy().map_err(|_| self.rt("bad || operand"))?;
                Ok(Value::Bool(r))
            }
            _ => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                self.arith(op, a, b)
            }
        }
    }

    fn eval_call(&mut self, callee: &str, args: &[Expr]) -> Result<Value, InterpError> {
        match callee {
            "scan" => self.builtin_scan(args),
            "print" => self.builtin_print(args),
            "fopenin" | "fopenout" => {
                // Stylistic redirection markers: the underlying streams
                // stay the same.
                self.eval(&args[0])?;
                Ok(Value::Int { v: 0, w: Width::W32 })
            }
            "len" => {
                let v = self.eval(&args[0])?;
                let n = match v {
                    Value::Str(b) => b.len(),
                    Value::VecArr { data, .. } => data.len(),
                    Value::Arr { data, .. } => data.len(),
                    Value::CharArr(b) => cstr(&b).len(),
                    _ => return Err(self.rt("len of non-sequence")),
                };
                Ok(Value::Int { v: n as i64, w: Width::W32 })
            }
            "strlen" => {
                let v = self.eval(&args[0])?;
                let n = match v {
                    Value::CharArr(b) => cstr(&b).len(),
                    Value::Str(b) => b.len(),
                    _ => return Err(self.rt("strlen of non-string")),
                };
                Ok(Value::Int { v: n as i64, w: Width::W32 })
            }
            "strcpy" => {
                let src = self.eval(&args[1])?;
                let bytes = match src {
                    Value::Str(b) => b,
                    Value::CharArr(b) => cstr(&b).to_vec(),
                    _ => return Err(self.rt("strcpy source must be a string")),
                };
                self.store(&args[0], Value::Str(bytes))?;
                Ok(Value::Int { v: 0, w: Width::W32 })
            }
            "strcmp" => {
                let a = self.eval(&args[0])?;
                let b = self.eval(&args[1])?;
                let ab = match &a {
                    Value::Str(b) => b.clone(),
                    Value::CharArr(x) => cstr(x).to_vec(),
                    _ => return Err(self.rt("strcmp on non-string")),
                };
                let bb = match &b {
                    Value::Str(b) => b.clone(),
                    Value::CharArr(x) => cstr(x).to_vec(),
                    _ => return Err(self.rt("strcmp on non-string")),
                };
                let r = match ab.cmp(&bb) {
                    core::cmp::Ordering::Less => -1,
                    core::cmp::Ordering::Equal => 0,
                    core::cmp::Ordering::Greater => 1,
                };
                Ok(Value::Int { v: r, w: Width::W32 })
            }
            "push" => {
                let item = self.eval(&args[1])?;
                let Expr::Var { name, .. } = &args[0] else {
                    return Err(self.rt("push target must be a vec variable"));
                };
                let name = name.clone();
                let slot = self
                    .find_var(&name)
                    .ok_or_else(|| InterpError::Runtime(format!("unknown variable {name}")))?;
                let Value::VecArr { elem, .. } = &slot.1 else {
                    return Err(InterpError::Runtime("push on non-vec".to_string()));
                };
                let conv = convert(*elem, item)?;
                let Value::VecArr { data, .. } = &mut self
                    .find_var(&name)
                    .expect("var exists")
                    .1
                else {
                    unreachable!()
                };
                data.push(conv);
                Ok(Value::Int { v: 0, w: Width::W32 })
            }
            "min" | "max" => {
                let a = self.eval(&args[0])?;
                let b = self.eval(&args[1])?;
                let want_min = callee == "min";
                let lt = self.arith(BinOpKind::Lt, a.clone(), b.clone())?;
                let takes_a = matches!(lt, Value::Bool(true)) == want_min;
                Ok(if takes_a { a } else { b })
            }
            "abs" => {
                let v = self.eval(&args[0])?;
                match v {
                    Value::Int { v, w } => {
                        let w = w.max(Width::W32);
                        Ok(Value::Int { v: w.wrap(v.wrapping_abs()), w })
                    }
                    Value::Float(f) => Ok(Value::Float(libm::fabs(f))),
                    Value::Char(c) => {
                        Ok(Value::Int { v: (c as i8 as i64).wrapping_abs(), w: Width::W32 })
                    }
                    _ => Err(self.rt("abs of non-number")),
                }
            }
            "sqrt" => {
                let v = self.eval(&args[0])?;
                let f = match v {
                    Value::Float(f) => f,
                    Value::Int { v, .. } => v as f64,
                    _ => return Err(self.rt("sqrt of non-number")),
                };
                if f < 0.0 {
                    return Err(self.rt("sqrt of negative"));
                }
                Ok(Value::Float(libm::sqrt(f)))
            }
            "swap" => {
                let a = self.load(&args[0])?;
                let b = self.load(&args[1])?;
                self.store(&args[0], b)?;
                self.store(&args[1], a)?;
                Ok(Value::Int { v: 0, w: Width::W32 })
            }
            name => {
                let func = self
                    .ast
                    .find_func(name)
                    .ok_or_else(|| InterpError::Runtime(format!("call to unknown function {name}")))?;
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval(a)?);
                }
                let (ret, outs) = self.call_func_full(func, vals)?;
                for ((p, a), out) in func.params.iter().zip(args).zip(outs) {
                    if p.by_ref {
                        let v = out.ok_or_else(|| self.rt("missing reference copy-out"))?;
                        self.store(a, v)?;
                    }
                }
                Ok(ret)
            }
        }
    }

    fn builtin_scan(&mut self, args: &[Expr]) -> Result<Value, InterpError> {
        let Expr::Literal { lit: Lit::Str(fmt), .. } = &args[0] else {
            return Err(self.rt("scan format must be a string literal"));
        };
        let fmt = fmt.clone();
        let mut arg_i = 1;
        let mut read = 0i64;
        let mut bytes = fmt.iter().peekable();
        while let Some(&b) = bytes.next() {
            if b != b'%' {
                continue;
            }
            let mut spec = Vec::new();
            while let Some(&&c) = bytes.peek() {
                spec.push(c);
                bytes.next();
                if c.is_ascii_alphabetic() && c != b'l' {
                    break;
                }
            }
            let conv = *spec.last().ok_or_else(|| self.rt("bad scan format"))?;
            if arg_i >= args.len() {
                return Err(self.rt("scan format has more conversions than arguments"));
            }
            let target = match &args[arg_i] {
                Expr::Un { op: UnOpKind::AddrOf, operand, .. } => &**operand,
                other => other,
            };
            arg_i += 1;
            let ty = match conv {
                b'd' => {
                    let s = self.lvalue_scalar(target)?;
                    if s.is_integral() { s } else { ScalarTy::Long }
                }
                b'c' => ScalarTy::Char,
                b's' => ScalarTy::Str,
                b'f' | b'g' => ScalarTy::Double,
                _ => return Err(self.rt("unsupported scan conversion")),
            };
            match self.read_token_as(ty) {
                Ok(v) => {
                    self.store(target, v)?;
                    read += 1;
                }
                Err(InterpError::Runtime(_)) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(Value::Int { v: read, w: Width::W32 })
    }

    fn builtin_print(&mut self, args: &[Expr]) -> Result<Value, InterpError> {
        let Expr::Literal { lit: Lit::Str(fmt), .. } = &args[0] else {
            return Err(self.rt("print format must be a string literal"));
        };
        let fmt = fmt.clone();
        let mut arg_i = 1;
        let mut out = String::new();
        let mut i = 0;
        while i < fmt.len() {
            let b = fmt[i];
            if b != b'%' {
                out.push(b as char);
                i += 1;
                continue;
            }
            i += 1;
            if i < fmt.len() && fmt[i] == b'%' {
                out.push('%');
                i += 1;
                continue;
            }
            // Parse %[.N][l...]conv
            let mut precision: Option<usize> = None;
            if i < fmt.len() && fmt[i] == b'.' {
                i += 1;
                let mut p = 0usize;
                while i < fmt.len() && fmt[i].is_ascii_digit() {
                    p = p * 10 + (fmt[i] - b'0') as usize;
                    i += 1;
                }
                precision = Some(p.min(17));
            }
            while i < fmt.len() && fmt[i] == b'l' {
                i += 1;
            }
            if i >= fmt.len() {
                return Err(self.rt("bad print format"));
            }
            let conv = fmt[i];
            i += 1;
            if arg_i >= args.len() {
                return Err(self.rt("print format has more conversions than arguments"));
            }
            let v = self.eval(&args[arg_i])?;
            arg_i += 1;
            match conv {
                b'd' => match v {
                    Value::Int { v, .. } => out.push_str(&format!("{v}")),
                    Value::Bool(b) => out.push_str(&format!("{}", b as i32)),
                    Value::Char(c) => out.push_str(&format!("{}", c as i8 as i64)),
                    _ => return Err(self.rt("%d needs an integer")),
                },
                b'c' => match v {
                    Value::Char(c) => out.push(c as char),
                    Value::Int { v, .. } => out.push((v as u8) as char),
                    _ => return Err(self.rt("%c needs a char")),
                },
                b's' => match v {
                    Value::Str(b) => out.push_str(&String::from_utf8_lossy(&b)),
                    Value::CharArr(b) => out.push_str(&String::from_utf8_lossy(cstr(&b))),
                    _ => return Err(self.rt("%s needs a string")),
                },
                b'f' | b'g' => {
                    let f = match v {
                        Value::Float(f) => f,
                        Value::Int { v, .. } => v as f64,
                        _ => return Err(self.rt("%f needs a number")),
                    };
                    out.push_str(&format!("{:.*}", precision.unwrap_or(6), f));
                }
                _ => return Err(self.rt("unsupported print conversion")),
            }
        }
        self.out.push_str(&out);
        Ok(Value::Int { v: 0, w: Width::W32 })
    }
}

/// Two programs are semantically equivalent on an input set when every
/// run succeeds on both sides with identical stdout and exit code. Any
/// error on either side makes the pair inequivalent.
pub fn semantically_equivalent(
    a: &SourceProgram,
    b: &SourceProgram,
    inputs: &[String],
    fuel: u64,
) -> bool {
    for input in inputs {
        let ra = interpret(a, input, fuel);
        let rb = interpret(b, input, fuel);
        match (ra, rb) {
            (Ok(x), Ok(y)) => {
                if x.stdout_text != y.stdout_text || x.exit_code != y.exit_code {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse::parse;
    use crate::samples::RECURSIVE_FOO_WITH_MAIN;
    use alloc::string::ToString;

    fn run(src: &str, input: &str) -> ProgramOutput {
        interpret(&parse(src).unwrap(), input, DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn recursive_product_of_three_prints_six() {
        let out = run(RECURSIVE_FOO_WITH_MAIN, "");
        assert_eq!(out.stdout_text, "6");
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn trivial_main_returns_zero() {
        let out = run("int main() { return 0; }", "anything");
        assert_eq!(out.stdout_text, "");
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn infinite_loop_exhausts_fuel() {
        let p = parse("int main() { while (1) { } return 0; }").unwrap();
        assert_eq!(interpret(&p, "", 1000), Err(InterpError::FuelExhausted));
    }

    #[test]
    fn steps_never_exceed_fuel() {
        let p = parse("int main() { while (1) { } return 0; }").unwrap();
        let out = interpret(&p, "", 100_000);
        assert_eq!(out, Err(InterpError::FuelExhausted));
        let ok = parse("int main() { return 0; }").unwrap();
        let r = interpret(&ok, "", 1000).unwrap();
        assert!(r.steps_used <= 1000);
    }

    #[test]
    fn division_by_zero_is_a_runtime_error() {
        let p = parse("int main() { int a = 0; output << 1 / a; return 0; }").unwrap();
        assert!(matches!(interpret(&p, "", 1000), Err(InterpError::Runtime(_))));
    }

    #[test]
    fn out_of_bounds_index_is_a_runtime_error() {
        let p = parse("int main() { int a[3]; a[5] = 1; return 0; }").unwrap();
        assert!(matches!(interpret(&p, "", 1000), Err(InterpError::Runtime(_))));
    }

    #[test]
    fn both_io_dialects_read_and_print() {
        let c_style = "int main() { int a; int b; scan(\"%d %d\", &a, &b); print(\"%d\\n\", a + b); return 0; }";
        let stream = "int main() { int a; int b; input >> a >> b; output << a + b << \"\\n\"; return 0; }";
        assert_eq!(run(c_style, "3 4").stdout_text, "7\n");
        assert_eq!(run(stream, "3 4").stdout_text, "7\n");
    }

    #[test]
    fn file_redirection_markers_are_no_ops() {
        let with_files = "int main() { fopenin(\"in.txt\"); fopenout(\"out.txt\"); int a; scan(\"%d\", &a); print(\"%d\", a * 2); return 0; }";
        assert_eq!(run(with_files, "21").stdout_text, "42");
    }

    #[test]
    fn float_precision_follows_setprec_and_formats() {
        let stream = "int main() { double x; input >> x; fixed; setprec(2); output << x << \"\\n\"; return 0; }";
        assert_eq!(run(stream, "3.14159").stdout_text, "3.14\n");
        let default_prec = "int main() { double x; input >> x; output << x; return 0; }";
        assert_eq!(run(default_prec, "1.5").stdout_text, "1.500000");
        let c_style = "int main() { double x; scan(\"%lf\", &x); print(\"%.2f\\n\", x); return 0; }";
        assert_eq!(run(c_style, "3.14159").stdout_text, "3.14\n");
        let c_default = "int main() { double x; scan(\"%lf\", &x); print(\"%f\", x); return 0; }";
        assert_eq!(run(c_default, "1.5").stdout_text, "1.500000");
    }

    #[test]
    fn integer_widths_wrap_on_store() {
        let p = "int main() { char c = 200; output << c + 0; short s = 40000; output << \" \" << s + 0; return 0; }";
        // 200 wraps to -56 in a signed byte; 40000 wraps to -25536.
        assert_eq!(run(p, "").stdout_text, "-56 -25536");
    }

    #[test]
    fn longlong_holds_wide_products() {
        let p = "int main() { longlong a = 100000; output << a * a; return 0; }";
        assert_eq!(run(p, "").stdout_text, "10000000000");
        let narrow = "int main() { int a = 100000; output << a * a; return 0; }";
        assert_eq!(run(narrow, "").stdout_text, "1410065408");
    }

    #[test]
    fn strings_vectors_arrays_work() {
        let p = r#"int main() {
            string s;
            input >> s;
            output << len(s) << " " << s[0] << "\n";
            vec<int> v(3);
            v[0] = 7;
            push(v, 9);
            output << len(v) << " " << v[0] << " " << v[3] << "\n";
            char buf[16];
            strcpy(buf, s);
            output << strlen(buf) << " " << buf << "\n";
            return 0;
        }"#;
        assert_eq!(run(p, "hello").stdout_text, "5 h\n4 7 9\n5 hello\n");
    }

    #[test]
    fn char_array_overflow_is_a_runtime_error() {
        let p = parse(
            "int main() { char buf[4]; string s; input >> s; strcpy(buf, s); return 0; }",
        )
        .unwrap();
        assert!(matches!(interpret(&p, "toolong", 10_000), Err(InterpError::Runtime(_))));
    }

    #[test]
    fn reference_parameters_copy_out() {
        let p = r#"
        void bump(int &x, int y) {
            x = x + y;
        }
        int main() {
            int a = 10;
            bump(a, 5);
            output << a;
            return 0;
        }"#;
        assert_eq!(run(p, "").stdout_text, "15");
    }

    #[test]
    fn builtins_min_max_abs_swap_sqrt() {
        let p = r#"int main() {
            int a = 3;
            int b = 8;
            swap(a, b);
            output << min(a, b) << " " << max(a, b) << " " << abs(0 - a) << " ";
            setprec(3);
            output << sqrt(2.0) << "\n";
            return 0;
        }"#;
        assert_eq!(run(p, "").stdout_text, "3 8 8 1.414\n");
    }

    #[test]
    fn missing_return_in_main_yields_zero_exit() {
        let p = "int main() { output << \"x\"; }";
        let out = run(p, "");
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.stdout_text, "x");
    }

    #[test]
    fn globals_are_zero_initialized_and_ordered() {
        let p = "int g;\nlonglong big = 1000000007;\nint main() { output << g << \" \" << big; return 0; }";
        assert_eq!(run(p, "").stdout_text, "0 1000000007");
    }

    #[test]
    fn determinism_two_runs_agree() {
        let p = parse(RECURSIVE_FOO_WITH_MAIN).unwrap();
        let a = interpret(&p, "", DEFAULT_FUEL).unwrap();
        let b = interpret(&p, "", DEFAULT_FUEL).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn equivalence_is_reflexive_and_detects_change()    {
        let p = parse(RECURSIVE_FOO_WITH_MAIN).unwrap();
        let inputs = alloc::vec!["".to_string()];
        assert!(semantically_equivalent(&p, &p, &inputs, DEFAULT_FUEL));
        let constant = parse("int main() { output << 0; return 0; }").unwrap();
        assert!(!semantically_equivalent(&p, &constant, &inputs, DEFAULT_FUEL));
        // Errors on either side mean "not equivalent".
        let broken = parse("int main() { int a = 0; return 1 / a; }").unwrap();
        assert!(!semantically_equivalent(&p, &broken, &inputs, DEFAULT_FUEL));
    }

    #[test]
    fn scan_returns_item_count() {
        let p = "int main() { int a; int total = 0; while (scan(\"%d\", &a) == 1) { total += a; } output << total; return 0; }";
        assert_eq!(run(p, "1 2 3 4").stdout_text, "10");
    }
}
