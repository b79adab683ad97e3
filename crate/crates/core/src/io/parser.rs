use std::collections::{BTreeMap, HashSet};

use super::lexer::{tokenize, Tok, Token};
use crate::automata::{compile_program, FiniteAutomaton, LogicSpec, DEFAULT_SYMMETRY_BOUND};
use crate::error::{Error, Result};
use crate::session::Problem;
use crate::syntax::{normalize_program, Atom, Context, FormulaId, Letter, Program, ProgramId, SimpleProgram};

const MAX_DEPTH: usize = 200;

enum Pending {
    Automaton(SimpleProgram, usize),
    Regex(SimpleProgram, ProgramId, (usize, usize)),
}

const KEYWORDS: &[&str] = &["true", "false"];

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    pub ctx: &'a mut Context,
    /// First use of each atom in a formula, for the declaration check.
    used: BTreeMap<Atom, (usize, usize)>,
    /// Inside a logic block `;` may also end a `regex` line.
    in_logic: bool,
    /// Positions known not to start a test, so backtracking stays linear.
    not_test: HashSet<usize>,
}

impl<'a> Parser<'a> {
    pub fn new(ctx: &'a mut Context, text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            depth: 0,
            ctx,
            used: BTreeMap::new(),
            in_logic: false,
            not_test: HashSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    /// Whether the `;` at the cursor is followed by the end of the logic
    /// block or by the start of another logic field.
    fn ends_statement(&self) -> bool {
        match (self.peek_at(1), self.peek_at(2), self.peek_at(3)) {
            (Tok::Sym("}"), _, _) => true,
            (Tok::Ident(k), Tok::Sym(":"), _) => k == "atoms",
            (Tok::Ident(k), Tok::Ident(_), next) => {
                matches!(k.as_str(), "regex" | "automaton") && matches!(next, Tok::Sym("=" | "{" | "^"))
            }
            _ => false,
        }
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Parse { line: t.line, column: t.column, message: message.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_owned(),
        }
    }

    fn is(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.is(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.error(format!("expected '{sym}', found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected an identifier, found {}", self.describe())),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error("nesting too deep");
        }
        Ok(())
    }

    pub fn formula(&mut self) -> Result<FormulaId> {
        self.enter()?;
        let lhs = self.disjunction()?;
        let out = if self.eat("->") {
            let rhs = self.formula()?;
            self.ctx.implies(lhs, rhs)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disjunction(&mut self) -> Result<FormulaId> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            let g = self.conjunction()?;
            f = self.ctx.or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<FormulaId> {
        let mut f = self.unary()?;
        while self.eat("&") {
            let g = self.unary()?;
            f = self.ctx.and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<FormulaId> {
        self.enter()?;
        let out = if self.eat("!") {
            let f = self.unary()?;
            self.ctx.not(f)
        } else if self.eat("<") {
            let p = self.program()?;
            self.expect(">")?;
            let f = self.unary()?;
            self.ctx.diamond(p, f)
        } else if self.eat("[") {
            let p = self.program()?;
            self.expect("]")?;
            let f = self.unary()?;
            self.ctx.boxed(p, f)
        } else if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            f
        } else {
            match self.peek().clone() {
                Tok::Ident(s) if s == "true" => {
                    self.pos += 1;
                    self.ctx.top()
                }
                Tok::Ident(s) if s == "false" => {
                    self.pos += 1;
                    self.ctx.bottom()
                }
                Tok::Ident(s) => {
                    self.pos += 1;
                    self.ctx.var(&s)
                }
                _ => return self.error(format!("expected a formula, found {}", self.describe())),
            }
        };
        self.depth -= 1;
        Ok(out)
    }

    pub fn program(&mut self) -> Result<ProgramId> {
        self.enter()?;
        let mut p = self.sequence()?;
        while self.eat("+") {
            let q = self.sequence()?;
            p = self.ctx.union(p, q);
        }
        self.depth -= 1;
        Ok(p)
    }

    fn sequence(&mut self) -> Result<ProgramId> {
        let p = self.postfix()?;
        if self.is(";") && !(self.in_logic && self.ends_statement()) {
            self.pos += 1;
            let q = self.sequence()?;
            Ok(self.ctx.seq(p, q))
        } else {
            Ok(p)
        }
    }

    fn postfix(&mut self) -> Result<ProgramId> {
        let mut p = self.primary_program()?;
        loop {
            if self.eat("*") {
                p = self.ctx.star(p);
            } else if self.eat("^") {
                p = match self.ctx.program(p) {
                    Program::Simple(s) => self.ctx.simple(s.converse()),
                    _ => self.ctx.converse(p),
                };
            } else {
                return Ok(p);
            }
        }
    }

    fn primary_program(&mut self) -> Result<ProgramId> {
        // A test `F?`: try a formula, fall back to a program.
        let save = (self.pos, self.depth);
        if !self.not_test.contains(&save.0) {
            if let Ok(f) = self.unary() {
                if self.eat("?") {
                    return Ok(self.ctx.test(f));
                }
            }
            (self.pos, self.depth) = save;
            self.not_test.insert(save.0);
        }
        if self.eat("(") {
            let p = self.program()?;
            self.expect(")")?;
            return Ok(p);
        }
        let t = &self.toks[self.pos];
        let at = (t.line, t.column);
        let name = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            self.pos -= 1;
            return self.error(format!("'{name}' is not a program"));
        }
        let a = self.ctx.atom(&name);
        self.used.entry(a).or_insert(at);
        Ok(self.ctx.simple(SimpleProgram::positive(a)))
    }

    fn simple(&mut self) -> Result<SimpleProgram> {
        let name = self.ident()?;
        let a = self.ctx.atom(&name);
        let conversed = self.eat("^");
        Ok(SimpleProgram { atom: a, conversed })
    }

    fn formula_list(&mut self) -> Result<Vec<FormulaId>> {
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.eat("}") {
            out.push(self.formula()?);
            if !self.eat(";") && !self.is("}") {
                return self.error(format!("expected ';' or '}}', found {}", self.describe()));
            }
        }
        Ok(out)
    }

    fn name_list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            out.push(self.ident()?);
            self.eat(",");
        }
        Ok(out)
    }

    fn automaton(&mut self, atoms: &[Atom]) -> Result<FiniteAutomaton> {
        self.expect("{")?;
        let mut names: Vec<String> = Vec::new();
        let mut initial = Vec::new();
        let mut finals = Vec::new();
        let mut trans = Vec::new();
        let lookup = |p: &Self, names: &Vec<String>, s: &str| -> Result<u32> {
            match names.iter().position(|n| n == s) {
                Some(i) => Ok(i as u32),
                None => p.error(format!("undeclared automaton state '{s}'")),
            }
        };
        while !self.eat("}") {
            let key = self.ident()?;
            self.expect(":")?;
            match key.as_str() {
                "states" => {
                    names = self.name_list()?;
                    self.expect(";")?;
                }
                "initial" => {
                    for n in self.name_list()? {
                        initial.push(lookup(self, &names, &n)?);
                    }
                    self.expect(";")?;
                }
                "final" => {
                    for n in self.name_list()? {
                        finals.push(lookup(self, &names, &n)?);
                    }
                    self.expect(";")?;
                }
                "trans" => {
                    while matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Sym("-") {
                        let from = self.ident()?;
                        let from = lookup(self, &names, &from)?;
                        self.expect("-")?;
                        let s = self.simple()?;
                        if !atoms.contains(&s.atom) {
                            return self.error(format!("undeclared program '{}'", self.ctx.atom_name(s.atom)));
                        }
                        self.expect("->")?;
                        let to = self.ident()?;
                        let to = lookup(self, &names, &to)?;
                        self.expect(";")?;
                        trans.push((from, s, to));
                    }
                }
                other => return self.error(format!("unknown automaton field '{other}'")),
            }
        }
        let mut aut = FiniteAutomaton::new(names.len() as u32);
        initial.into_iter().for_each(|q| aut.add_initial(q));
        finals.into_iter().for_each(|q| aut.add_final(q));
        for (q, s, t) in trans {
            aut.add_transition(q, Letter::Simple(s), t);
        }
        Ok(aut)
    }

    fn logic(&mut self, logic: &mut LogicSpec) -> Result<()> {
        self.expect("{")?;
        let mut declared: Vec<Atom> = Vec::new();
        let mut pending = Vec::new();
        while !self.eat("}") {
            let t = &self.toks[self.pos];
            let at = (t.line, t.column);
            let key = self.ident()?;
            match key.as_str() {
                "atoms" => {
                    self.expect(":")?;
                    for n in self.name_list()? {
                        let a = self.ctx.atom(&n);
                        if !declared.contains(&a) {
                            declared.push(a);
                        }
                    }
                    self.expect(";")?;
                }
                "automaton" => {
                    let s = self.simple()?;
                    if !declared.contains(&s.atom) {
                        declared.push(s.atom);
                    }
                    // Transitions may mention atoms declared further down,
                    // so the body is parsed after the whole block.
                    pending.push(Pending::Automaton(s, self.pos));
                    self.skip_block()?;
                }
                "regex" => {
                    let s = self.simple()?;
                    if !declared.contains(&s.atom) {
                        declared.push(s.atom);
                    }
                    self.expect("=")?;
                    let before = self.used.clone();
                    self.in_logic = true;
                    let p = self.program();
                    self.in_logic = false;
                    let p = p?;
                    self.used = before;
                    self.expect(";")?;
                    pending.push(Pending::Regex(s, p, at));
                }
                other => {
                    self.pos -= 1;
                    return self.error(format!("unknown logic field '{other}'"));
                }
            }
        }
        let end = self.pos;
        for &a in &declared {
            logic.declare_atom(a);
        }
        for item in pending {
            let (s, aut) = match item {
                Pending::Regex(s, p, (line, column)) => {
                    let top = self.ctx.top();
                    let probe = self.ctx.diamond(p, top);
                    let mut atoms = Vec::new();
                    self.ctx.atoms_of(probe, &mut atoms);
                    if let Some(a) = atoms.iter().find(|a| !declared.contains(a)) {
                        let message = format!("undeclared program '{}'", self.ctx.atom_name(*a));
                        return Err(Error::Parse { line, column, message });
                    }
                    let np = normalize_program(self.ctx, p);
                    if program_has_test(self.ctx, np) {
                        let message = "tests are not allowed in a logic".to_owned();
                        return Err(Error::Parse { line, column, message });
                    }
                    (s, compile_program(self.ctx, np))
                }
                Pending::Automaton(s, pos) => {
                    self.pos = pos;
                    (s, self.automaton(&declared)?)
                }
            };
            logic.set_automaton(s, aut);
        }
        self.pos = end;
        Ok(())
    }

    fn skip_block(&mut self) -> Result<()> {
        if !self.is("{") {
            return self.error(format!("expected '{{', found {}", self.describe()));
        }
        let mut depth = 0;
        loop {
            match self.peek() {
                Tok::Sym("{") => depth += 1,
                Tok::Sym("}") => depth -= 1,
                Tok::Eof => return self.error("unterminated block"),
                _ => {}
            }
            self.pos += 1;
            if depth == 0 {
                return Ok(());
            }
        }
    }

    pub fn problem(mut self) -> Result<(LogicSpec, bool, Vec<FormulaId>, Vec<FormulaId>)> {
        let mut logic = LogicSpec::identity();
        let mut has_logic = false;
        let mut goal = Vec::new();
        let mut assumptions = Vec::new();
        while !self.at_end() {
            if self.is_keyword("logic") {
                if has_logic {
                    return self.error("duplicate logic block");
                }
                self.pos += 1;
                let before = self.used.clone();
                self.logic(&mut logic)?;
                self.used = before;
                has_logic = true;
            } else if self.is_keyword("goal") {
                self.pos += 1;
                goal.extend(self.formula_list()?);
            } else if self.is_keyword("assumptions") {
                self.pos += 1;
                assumptions.extend(self.formula_list()?);
            } else {
                return self.error(format!("expected 'logic', 'assumptions' or 'goal', found {}", self.describe()));
            }
        }
        if has_logic {
            for (&a, &(line, column)) in &self.used {
                if !logic.atoms().contains(&a) {
                    return Err(Error::Parse {
                        line,
                        column,
                        message: format!("undeclared program '{}'", self.ctx.atom_name(a)),
                    });
                }
            }
        }
        Ok((logic, has_logic, goal, assumptions))
    }
}

fn program_has_test(ctx: &Context, p: ProgramId) -> bool {
    match ctx.program(p) {
        Program::Simple(_) => false,
        Program::Test(_) => true,
        Program::Seq(a, b) | Program::Union(a, b) => program_has_test(ctx, a) || program_has_test(ctx, b),
        Program::Star(a) | Program::Converse(a) => program_has_test(ctx, a),
    }
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut ctx = Context::new();
    let (logic, _, goal, assumptions) = Parser::new(&mut ctx, text)?.problem()?;
    let warnings = logic.validate(&ctx, DEFAULT_SYMMETRY_BOUND)?;
    let mut problem = Problem::new(ctx, logic);
    problem.warnings = warnings;
    for f in goal {
        problem.add_goal(f);
    }
    for f in assumptions {
        problem.add_assumption(f);
    }
    Ok(problem)
}

/// Parses a single formula into `ctx`, without normalizing it.
pub fn parse_formula(ctx: &mut Context, text: &str) -> Result<FormulaId> {
    let mut p = Parser::new(ctx, text)?;
    let f = p.formula()?;
    if !p.at_end() {
        return p.error(format!("unexpected {} after formula", p.describe()));
    }
    Ok(f)
}

/// Parses a single program into `ctx`, without normalizing it.
pub fn parse_program(ctx: &mut Context, text: &str) -> Result<ProgramId> {
    let mut p = Parser::new(ctx, text)?;
    let a = p.program()?;
    if !p.at_end() {
        return p.error(format!("unexpected {} after program", p.describe()));
    }
    Ok(a)
}
