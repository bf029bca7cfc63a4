use std::collections::HashMap;

use super::check::{self, SourceMap};
use super::definition::{LSystemDefinition, ScheduleSpec};
use super::expr::{builtin_arity, eval_expr, Axis, BinOp, CmpOp, Expr, Function, LogicOp, NoVars, Scope};
use super::lexer::{tokenize, Pos, Tok, Token};
use super::{ParseError, Warning};
use crate::rewriting::{
    Module, ModuleString, ParamValue, PatternModule, Production, Table, TableError, TemplateModule, Topology,
};

/// Parses a definition, rejecting nothing that only merits a warning.
pub fn parse(text: &str) -> Result<LSystemDefinition, ParseError> {
    parse_with_warnings(text).map(|(def, warnings)| {
        for w in &warnings {
            log::warn!("{w}");
        }
        def
    })
}

/// Parses a definition and returns the static-check warnings alongside it.
pub fn parse_with_warnings(text: &str) -> Result<(LSystemDefinition, Vec<Warning>), ParseError> {
    let mut p = Parser::new(text)?;
    let (def, map) = p.definition()?;
    let warnings = check::check(&def, &map)?;
    Ok((def, warnings))
}

/// Parses a bare word such as `A(4) P((1,0)) E` into a linear string.
/// Parameters may be literal expressions but cannot reference names.
pub fn parse_word(text: &str) -> Result<ModuleString, ParseError> {
    let mut p = Parser::new(text)?;
    let modules = p.word_with_constants()?;
    p.expect(Tok::Eof)?;
    Ok(ModuleString::linear(modules))
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    scope: Scope,
}

/// Names an expression may reference besides declared constants.
#[derive(Clone, Copy)]
struct Names<'a> {
    vars: &'a [String],
}

const NO_NAMES: Names<'static> = Names { vars: &[] };

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            i: 0,
            scope: Scope::default(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i < self.toks.len() - 1 {
            self.i += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.i];
        let text = if t.tok == Tok::Eof { "end of input" } else { &t.text };
        ParseError::new(t.pos, message, text)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!("expected `{tok}`")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.pos();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{kw}`")))
        }
    }

    fn definition(&mut self) -> Result<(LSystemDefinition, SourceMap), ParseError> {
        self.keyword("lsystem")?;
        let (name, _) = self.ident("a definition name")?;
        self.expect(Tok::LBrace)?;

        let mut topology = Topology::Linear;
        if self.is_keyword("circular") {
            self.bump();
            topology = Topology::Circular;
        } else if self.is_keyword("linear") {
            self.bump();
        }
        loop {
            if self.is_keyword("const") {
                self.const_decl()?;
            } else if self.is_keyword("fn") {
                self.fn_decl()?;
            } else {
                break;
            }
        }

        let mut map = SourceMap::default();
        self.keyword("axiom")?;
        self.expect(Tok::Colon)?;
        map.axiom = self.pos();
        let modules = self.word_with_constants()?;
        if modules.is_empty() {
            return Err(self.error_here("the axiom must contain at least one module"));
        }
        check_uniform_dimension(&modules, map.axiom)?;
        self.expect(Tok::Semi)?;
        let axiom = ModuleString::new(modules, topology);

        let mut tables: Vec<Table> = Vec::new();
        while self.is_keyword("table") {
            self.bump();
            let (tname, tpos) = self.ident("a table name")?;
            if tables.iter().any(|t| t.name == tname) {
                return Err(ParseError::new(tpos, "duplicate table", &tname));
            }
            self.expect(Tok::LBrace)?;
            let mut prods = Vec::new();
            let mut positions = Vec::new();
            while *self.peek() != Tok::RBrace {
                positions.push(self.pos());
                prods.push(self.production()?);
            }
            self.expect(Tok::RBrace)?;
            let labels: Vec<String> = prods.iter().map(|p| p.label.clone()).collect();
            let table = Table::new(&tname, prods).map_err(|e| {
                let (label, idx) = match &e {
                    TableError::DuplicateLabel { label, .. } => (label, labels.iter().rposition(|l| l == label)),
                    TableError::EmptyPredecessor(label) | TableError::DuplicateVariable { label, .. } => {
                        (label, labels.iter().position(|l| l == label))
                    }
                };
                ParseError::new(idx.map_or(tpos, |i| positions[i]), e.to_string(), label)
            })?;
            map.productions.push(positions);
            tables.push(table);
        }
        if tables.is_empty() {
            return Err(self.error_here("expected at least one `table`"));
        }

        let mut interpretation = Vec::new();
        if self.is_keyword("interpret") {
            self.bump();
            loop {
                let (t, pos) = self.ident("a table name")?;
                if !tables.iter().any(|x| x.name == t) {
                    return Err(ParseError::new(pos, "unknown table", &t));
                }
                interpretation.push(t);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }

        self.keyword("schedule")?;
        let cycles = self.expr(NO_NAMES)?;
        self.expect(Tok::LBrace)?;
        let mut steps = Vec::new();
        while *self.peek() != Tok::RBrace {
            let (t, pos) = self.ident("a table name")?;
            if !tables.iter().any(|x| x.name == t) {
                return Err(ParseError::new(pos, "unknown table", &t));
            }
            self.expect(Tok::Colon)?;
            let n = self.expr(NO_NAMES)?;
            self.expect(Tok::Semi)?;
            steps.push((t, n));
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        self.expect(Tok::Eof)?;

        let def = LSystemDefinition {
            name,
            topology,
            scope: std::mem::take(&mut self.scope),
            axiom,
            tables,
            interpretation,
            schedule: ScheduleSpec { steps, cycles },
        };
        def.schedule()
            .map_err(|e| ParseError::new(map.axiom, format!("invalid schedule: {e}"), ""))?;
        Ok((def, map))
    }

    fn const_decl(&mut self) -> Result<(), ParseError> {
        self.keyword("const")?;
        let (name, pos) = self.ident("a constant name")?;
        if self.scope.constants.contains_key(&name) {
            return Err(ParseError::new(pos, "duplicate constant", &name));
        }
        self.expect(Tok::Assign)?;
        let epos = self.pos();
        let e = self.expr(NO_NAMES)?;
        self.expect(Tok::Semi)?;
        let value = match eval_expr(&e, &NoVars, &self.scope) {
            Ok(ParamValue::Scalar(v)) => v,
            Ok(ParamValue::Point(_)) => return Err(ParseError::new(epos, "constants must be scalars", &name)),
            Err(err) => return Err(ParseError::new(epos, err.to_string(), &name)),
        };
        self.scope.constants.insert(name, value);
        Ok(())
    }

    fn fn_decl(&mut self) -> Result<(), ParseError> {
        self.keyword("fn")?;
        let (name, pos) = self.ident("a function name")?;
        if self.scope.functions.contains_key(&name) || builtin_arity(&name).is_some() {
            return Err(ParseError::new(pos, "function already defined", &name));
        }
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        loop {
            let (p, ppos) = self.ident("a parameter name")?;
            if params.contains(&p) {
                return Err(ParseError::new(ppos, "duplicate parameter", &p));
            }
            params.push(p);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Assign)?;
        let body = self.expr(Names { vars: &params })?;
        self.expect(Tok::Semi)?;
        self.scope.functions.insert(name, Function { params, body });
        Ok(())
    }

    fn pattern_word(&mut self) -> Result<Vec<PatternModule>, ParseError> {
        let mut word = Vec::new();
        while let Tok::Ident(symbol) = self.peek().clone() {
            self.bump();
            let mut vars = Vec::new();
            if self.eat(&Tok::LParen) {
                if *self.peek() != Tok::RParen {
                    loop {
                        vars.push(self.ident("a variable name")?.0);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
            }
            word.push(PatternModule { symbol, vars });
        }
        if word.is_empty() {
            return Err(self.error_here("expected a pattern module"));
        }
        Ok(word)
    }

    fn production(&mut self) -> Result<Production, ParseError> {
        let (label, lpos) = self.ident("a production label")?;
        self.expect(Tok::Colon)?;
        let first = self.pattern_word()?;
        let (left, strict) = if self.eat(&Tok::Lt) {
            (first, self.pattern_word()?)
        } else {
            (Vec::new(), first)
        };
        let right = if self.eat(&Tok::Gt) {
            self.pattern_word()?
        } else {
            Vec::new()
        };

        let mut arities: HashMap<&str, usize> = HashMap::new();
        for m in left.iter().chain(&strict).chain(&right) {
            if *arities.entry(&m.symbol).or_insert(m.vars.len()) != m.vars.len() {
                return Err(ParseError::new(
                    lpos,
                    format!("symbol `{}` appears with different arities in one production", m.symbol),
                    &label,
                ));
            }
        }

        let vars: Vec<String> = left
            .iter()
            .chain(&strict)
            .chain(&right)
            .flat_map(|m| m.vars.iter().cloned())
            .collect();
        let names = Names { vars: &vars };
        let condition = if self.eat(&Tok::Colon) {
            Some(self.expr(names)?)
        } else {
            None
        };
        self.expect(Tok::Arrow)?;
        let mut successor = Vec::new();
        if self.is_keyword("eps") {
            self.bump();
        } else {
            while let Tok::Ident(symbol) = self.peek().clone() {
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.args(names)?
                } else {
                    Vec::new()
                };
                successor.push(TemplateModule { symbol, args });
            }
        }
        self.expect(Tok::Semi)?;
        Ok(Production {
            label,
            left,
            strict,
            right,
            condition,
            successor,
        })
    }

    fn args(&mut self, names: Names) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.expr(names)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn word_with_constants(&mut self) -> Result<Vec<Module>, ParseError> {
        let mut modules = Vec::new();
        while let Tok::Ident(symbol) = self.peek().clone() {
            self.bump();
            let mut params = Vec::new();
            if *self.peek() == Tok::LParen {
                let pos = self.pos();
                for a in self.args(NO_NAMES)? {
                    let v = eval_expr(&a, &NoVars, &self.scope)
                        .map_err(|e| ParseError::new(pos, e.to_string(), &symbol))?;
                    params.push(v);
                }
            }
            modules.push(Module { symbol, params });
        }
        Ok(modules)
    }

    // expressions, lowest precedence first

    fn expr(&mut self, names: Names) -> Result<Expr, ParseError> {
        let mut lhs = self.and_expr(names)?;
        while self.eat(&Tok::OrOr) {
            let rhs = self.and_expr(names)?;
            lhs = Expr::Logic(LogicOp::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self, names: Names) -> Result<Expr, ParseError> {
        let mut lhs = self.cmp_expr(names)?;
        while self.eat(&Tok::AndAnd) {
            let rhs = self.cmp_expr(names)?;
            lhs = Expr::Logic(LogicOp::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self, names: Names) -> Result<Expr, ParseError> {
        let lhs = self.add_expr(names)?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::EqEq | Tok::Assign => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.add_expr(names)?;
        Ok(Expr::compare(op, lhs, rhs))
    }

    fn add_expr(&mut self, names: Names) -> Result<Expr, ParseError> {
        let mut lhs = self.mul_expr(names)?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.mul_expr(names)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn mul_expr(&mut self, names: Names) -> Result<Expr, ParseError> {
        let mut lhs = self.unary(names)?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary(names)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self, names: Names) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary(names)?)));
        }
        if self.eat(&Tok::Bang) {
            return Ok(Expr::Not(Box::new(self.unary(names)?)));
        }
        let mut e = self.primary(names)?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let (axis, pos) = self.ident("a coordinate name")?;
            let axis = match axis.as_str() {
                "x" => Axis::X,
                "y" => Axis::Y,
                "z" => Axis::Z,
                _ => return Err(ParseError::new(pos, "coordinates are `x`, `y` or `z`", &axis)),
            };
            e = e.component(axis);
        }
        Ok(e)
    }

    fn primary(&mut self, names: Names) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                if *self.peek() == Tok::LParen {
                    let expected = match self.scope.functions.get(&name) {
                        Some(f) => f.params.len(),
                        None => builtin_arity(&name).ok_or_else(|| ParseError::new(pos, "unknown function", &name))?,
                    };
                    let args = self.args(names)?;
                    if args.len() != expected {
                        return Err(ParseError::new(
                            pos,
                            format!("`{name}` takes {expected} arguments, got {}", args.len()),
                            &name,
                        ));
                    }
                    return Ok(Expr::Call(name, args));
                }
                if !names.vars.contains(&name) && !self.scope.constants.contains_key(&name) {
                    return Err(ParseError::new(pos, "unbound variable", &name));
                }
                Ok(Expr::Name(name))
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr(names)?;
                if self.eat(&Tok::RParen) {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr(names)?);
                }
                if !(2..=3).contains(&items.len()) {
                    return Err(self.error_here("point literals have 2 or 3 coordinates"));
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::Tuple(items))
            }
            _ => Err(self.error_here("expected an expression")),
        }
    }
}

fn check_uniform_dimension(modules: &[Module], pos: Pos) -> Result<(), ParseError> {
    let mut dim = None;
    for m in modules {
        for p in m.params.iter().filter_map(ParamValue::as_point) {
            match dim {
                None => dim = Some(p.dim()),
                Some(d) if d != p.dim() => {
                    return Err(ParseError::new(
                        pos,
                        format!("axiom mixes {d}-D and {}-D points", p.dim()),
                        &m.symbol,
                    ))
                }
                _ => {}
            }
        }
    }
    Ok(())
}
