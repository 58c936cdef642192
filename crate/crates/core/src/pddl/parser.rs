use super::ast::*;
use super::token::{tokenize_lossy, Token, TokenKind};
use super::{Diagnostic, Severity};

/// Known requirement flags; anything else parses with a warning.
const KNOWN_REQUIREMENTS: [&str; 2] = [":strips", ":typing"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
}

impl Parser {
    fn new(text: &str) -> Self {
        let (tokens, diagnostics) = tokenize_lossy(text);
        Parser {
            tokens,
            pos: 0,
            diagnostics,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> (u32, u32) {
        match self.tokens.get(self.pos).or_else(|| self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        }
    }

    fn error(&mut self, message: impl Into<String>) {
        let (line, column) = self.here();
        self.error_at(message, line, column);
    }

    fn error_at(&mut self, message: impl Into<String>, line: u32, column: u32) {
        self.diagnostics.push(Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line,
            column,
        });
    }

    fn warning(&mut self, message: impl Into<String>) {
        let (line, column) = self.here();
        self.diagnostics.push(Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            line,
            column,
        });
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn at_symbol(&self, text: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Symbol && t.text == text)
    }

    fn at_keyword(&self, text: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Keyword && t.text == text)
    }

    fn expect_lparen(&mut self, context: &str) -> bool {
        if self.at(TokenKind::LParen) {
            self.bump();
            true
        } else {
            self.error(format!("expected `(` {context}"));
            false
        }
    }

    fn expect_rparen(&mut self, context: &str) -> bool {
        if self.at(TokenKind::RParen) {
            self.bump();
            true
        } else {
            self.error(format!("expected `)` {context}"));
            false
        }
    }

    fn expect_name(&mut self, context: &str) -> Option<Spanned<String>> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Symbol && t.text != "-" => {
                let t = self.bump().unwrap();
                Some(Spanned::new(t.text, t.line, t.column))
            }
            _ => {
                self.error(format!("expected a name {context}"));
                None
            }
        }
    }

    /// Skips past the close of a form whose `(` has already been consumed.
    fn skip_form_rest(&mut self) {
        let mut depth = 1usize;
        while depth > 0 {
            match self.bump() {
                Some(t) if t.kind == TokenKind::LParen => depth += 1,
                Some(t) if t.kind == TokenKind::RParen => depth -= 1,
                Some(_) => {}
                None => return,
            }
        }
    }

    /// Skips a whole form (or a single stray token) starting here.
    fn skip_form(&mut self) {
        if self.at(TokenKind::LParen) {
            self.bump();
            self.skip_form_rest();
        } else {
            self.bump();
        }
    }

    fn parse_atom_body(&mut self) -> Option<Spanned<AstAtom>> {
        let name = match self.expect_name("to start an atom") {
            Some(n) => n,
            None => {
                self.skip_form_rest();
                return None;
            }
        };
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::RParen => {
                    self.bump();
                    break;
                }
                Some(t) if t.kind == TokenKind::Symbol && t.text != "-" => {
                    let t = self.bump().unwrap();
                    args.push(Term::Constant(t.text));
                }
                Some(t) if t.kind == TokenKind::Variable => {
                    let t = self.bump().unwrap();
                    args.push(Term::Variable(t.text));
                }
                _ => {
                    self.error("expected an atom argument or `)`");
                    self.skip_form_rest();
                    return None;
                }
            }
        }
        Some(Spanned::new(
            AstAtom {
                predicate: name.node.clone(),
                args,
            },
            name.line,
            name.column,
        ))
    }

    /// Parses a literal form; the opening `(` has already been consumed.
    fn parse_literal_body(&mut self) -> Option<AstLiteral> {
        if self.at_symbol("not") {
            self.bump();
            if !self.expect_lparen("after `not`") {
                self.skip_form_rest();
                return None;
            }
            let atom = self.parse_atom_body()?;
            if !self.expect_rparen("to close `(not ...)`") {
                self.skip_form_rest();
                return None;
            }
            Some(AstLiteral {
                atom,
                positive: false,
            })
        } else {
            let atom = self.parse_atom_body()?;
            Some(AstLiteral {
                atom,
                positive: true,
            })
        }
    }

    /// Parses `<literal>` or `(and <literal>*)`.
    fn parse_conjunction(&mut self, context: &str) -> Option<Vec<AstLiteral>> {
        if !self.expect_lparen(context) {
            return None;
        }
        if self.at_symbol("and") {
            self.bump();
            let mut literals = Vec::new();
            loop {
                if self.at(TokenKind::RParen) {
                    self.bump();
                    return Some(literals);
                }
                if self.at(TokenKind::LParen) {
                    self.bump();
                    if let Some(lit) = self.parse_literal_body() {
                        literals.push(lit);
                    }
                } else {
                    self.error("expected a literal or `)` inside `(and ...)`");
                    self.skip_form_rest();
                    return Some(literals);
                }
            }
        }
        self.parse_literal_body().map(|lit| vec![lit])
    }

    /// Parses `name+ - type` groups until the closing paren of the list.
    fn parse_typed_list(&mut self, element: TokenKind, what: &str) -> Vec<TypedName> {
        let mut out = Vec::new();
        let mut pending: Vec<Spanned<String>> = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::RParen => {
                    self.bump();
                    if let Some(first) = pending.first() {
                        let (line, column) = (first.line, first.column);
                        self.error_at(format!("missing type for {what} `{first}`"), line, column);
                    }
                    return out;
                }
                Some(t) if t.kind == TokenKind::Symbol && t.text == "-" => {
                    self.bump();
                    let ty = self.expect_name("after `-` in a typed list");
                    if pending.is_empty() {
                        self.error("`-` with nothing to type");
                    }
                    if let Some(ty) = ty {
                        for name in pending.drain(..) {
                            out.push(TypedName {
                                name,
                                ty: ty.clone(),
                            });
                        }
                    } else {
                        pending.clear();
                    }
                }
                Some(t) if t.kind == element => {
                    let t = self.bump().unwrap();
                    pending.push(Spanned::new(t.text, t.line, t.column));
                }
                _ => {
                    self.error(format!("expected a {what} or `)`"));
                    self.skip_form_rest();
                    return out;
                }
            }
        }
    }

    fn parse_requirements(&mut self, out: &mut Vec<String>) {
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::RParen => {
                    self.bump();
                    return;
                }
                Some(t) if t.kind == TokenKind::Keyword => {
                    if !KNOWN_REQUIREMENTS.contains(&t.text.as_str()) {
                        let msg = format!("unknown requirement `{}`", t.text);
                        self.warning(msg);
                    }
                    let t = self.bump().unwrap();
                    out.push(t.text);
                }
                _ => {
                    self.error("expected a `:requirement` flag or `)`");
                    self.skip_form_rest();
                    return;
                }
            }
        }
    }

    fn parse_predicates(&mut self, out: &mut Vec<PredicateDecl>) {
        loop {
            if self.at(TokenKind::RParen) {
                self.bump();
                return;
            }
            if !self.expect_lparen("to start a predicate declaration") {
                self.skip_form_rest();
                return;
            }
            let Some(name) = self.expect_name("for the predicate") else {
                self.skip_form_rest();
                continue;
            };
            let mut params = Vec::new();
            loop {
                match self.peek() {
                    Some(t) if t.kind == TokenKind::RParen => {
                        self.bump();
                        out.push(PredicateDecl {
                            name: name.clone(),
                            params,
                        });
                        break;
                    }
                    Some(t) if t.kind == TokenKind::Variable => {
                        let t = self.bump().unwrap();
                        params.push(t.text);
                    }
                    _ => {
                        self.error(format!(
                            "expected a parameter variable or `)` in predicate `{name}`"
                        ));
                        self.skip_form_rest();
                        break;
                    }
                }
            }
        }
    }

    fn parse_action(&mut self) -> Option<AstAction> {
        let Some(name) = self.expect_name("for the action") else {
            self.skip_form_rest();
            return None;
        };
        let mut params = None;
        let mut precondition = None;
        let mut effect = None;
        loop {
            if self.at(TokenKind::RParen) {
                self.bump();
                break;
            }
            if self.at_keyword(":parameters") {
                self.bump();
                if self.expect_lparen("after :parameters") {
                    params = Some(self.parse_typed_list(TokenKind::Variable, "parameter"));
                } else {
                    self.skip_form_rest();
                    return None;
                }
            } else if self.at_keyword(":precondition") {
                self.bump();
                precondition = self.parse_conjunction("after :precondition");
            } else if self.at_keyword(":effect") {
                self.bump();
                effect = self.parse_conjunction("after :effect");
            } else {
                let (line, column) = self.here();
                self.error_at(format!("unexpected input in action `{name}`"), line, column);
                self.skip_form_rest();
                return None;
            }
        }
        let (line, column) = (name.line, name.column);
        let mut missing = Vec::new();
        if params.is_none() {
            missing.push(":parameters");
        }
        if precondition.is_none() {
            missing.push(":precondition");
        }
        if effect.is_none() {
            missing.push(":effect");
        }
        if !missing.is_empty() {
            self.error_at(
                format!("action `{name}` is missing {}", missing.join(", ")),
                line,
                column,
            );
            return None;
        }
        Some(AstAction {
            name,
            params: params.unwrap(),
            precondition: precondition.unwrap(),
            effect: effect.unwrap(),
        })
    }

    /// Parses `(define (<kind> <name>) ...` and returns the name.
    fn parse_define_header(&mut self, kind: &str) -> Option<String> {
        if !self.expect_lparen("to open the document") {
            return None;
        }
        if self.at_symbol("define") {
            self.bump();
        } else {
            self.error("expected `define`");
            return None;
        }
        if !self.expect_lparen(&format!("to open `({kind} ...)`")) {
            return None;
        }
        if self.at_symbol(kind) {
            self.bump();
        } else {
            self.error(format!("expected `{kind}`"));
            return None;
        }
        let name = self.expect_name(&format!("for the {kind}"))?;
        if !self.expect_rparen(&format!("to close `({kind} ...)`")) {
            return None;
        }
        Some(name.node)
    }

    fn check_trailing(&mut self) {
        if self.peek().is_some() {
            self.error("unexpected input after the end of the document");
        }
    }

    fn parse_domain(mut self) -> (Option<DomainAst>, Vec<Diagnostic>) {
        let Some(name) = self.parse_define_header("domain") else {
            return (None, self.diagnostics);
        };
        let mut domain = DomainAst {
            name,
            requirements: Vec::new(),
            types: Vec::new(),
            predicates: Vec::new(),
            actions: Vec::new(),
        };
        loop {
            if self.at(TokenKind::RParen) {
                self.bump();
                break;
            }
            if self.peek().is_none() {
                self.error("unexpected end of input inside the domain");
                break;
            }
            if !self.expect_lparen("to start a domain section") {
                self.skip_form();
                continue;
            }
            if self.at_keyword(":requirements") {
                self.bump();
                self.parse_requirements(&mut domain.requirements);
            } else if self.at_keyword(":types") {
                self.bump();
                loop {
                    match self.peek() {
                        Some(t) if t.kind == TokenKind::RParen => {
                            self.bump();
                            break;
                        }
                        Some(t) if t.kind == TokenKind::Symbol && t.text != "-" => {
                            let t = self.bump().unwrap();
                            domain.types.push(Spanned::new(t.text, t.line, t.column));
                        }
                        _ => {
                            self.error(
                                "expected a type name or `)` (type hierarchies are not supported)",
                            );
                            self.skip_form_rest();
                            break;
                        }
                    }
                }
            } else if self.at_keyword(":predicates") {
                self.bump();
                self.parse_predicates(&mut domain.predicates);
            } else if self.at_keyword(":action") {
                self.bump();
                if let Some(action) = self.parse_action() {
                    domain.actions.push(action);
                }
            } else {
                self.error(
                    "expected a domain section (:requirements, :types, :predicates or :action)",
                );
                self.skip_form_rest();
            }
        }
        self.check_trailing();
        (Some(domain), self.diagnostics)
    }

    fn parse_problem(mut self) -> (Option<ProblemAst>, Vec<Diagnostic>) {
        let Some(name) = self.parse_define_header("problem") else {
            return (None, self.diagnostics);
        };
        let mut problem = ProblemAst {
            name,
            domain: String::new(),
            objects: Vec::new(),
            init: Vec::new(),
            goal: Vec::new(),
        };
        let mut saw_domain = false;
        let mut saw_goal = false;
        loop {
            if self.at(TokenKind::RParen) {
                self.bump();
                break;
            }
            if self.peek().is_none() {
                self.error("unexpected end of input inside the problem");
                break;
            }
            if !self.expect_lparen("to start a problem section") {
                self.skip_form();
                continue;
            }
            if self.at_keyword(":domain") {
                self.bump();
                if let Some(d) = self.expect_name("for the domain reference") {
                    problem.domain = d.node;
                    saw_domain = true;
                }
                self.expect_rparen("to close `(:domain ...)`");
            } else if self.at_keyword(":objects") {
                self.bump();
                problem.objects = self.parse_typed_list(TokenKind::Symbol, "object");
            } else if self.at_keyword(":init") {
                self.bump();
                loop {
                    if self.at(TokenKind::RParen) {
                        self.bump();
                        break;
                    }
                    if !self.at(TokenKind::LParen) {
                        self.error("expected an atom or `)` in :init");
                        self.skip_form_rest();
                        break;
                    }
                    self.bump();
                    if self.at_symbol("not") {
                        self.error("negative literals are not allowed in :init");
                        self.skip_form_rest();
                        continue;
                    }
                    if let Some(atom) = self.parse_atom_body() {
                        problem.init.push(atom);
                    }
                }
            } else if self.at_keyword(":goal") {
                self.bump();
                if let Some(goal) = self.parse_conjunction("after :goal") {
                    problem.goal = goal;
                    saw_goal = true;
                }
                self.expect_rparen("to close `(:goal ...)`");
            } else {
                self.error("expected a problem section (:domain, :objects, :init or :goal)");
                self.skip_form_rest();
            }
        }
        if !saw_domain {
            self.error("problem is missing its (:domain ...) reference");
        }
        if !saw_goal {
            self.error("problem is missing its (:goal ...) section");
        }
        self.check_object_references(&problem);
        self.check_trailing();
        (Some(problem), self.diagnostics)
    }

    /// Intra-file semantic check: every init/goal argument names a declared
    /// object.
    fn check_object_references(&mut self, problem: &ProblemAst) {
        let declared = |name: &str| problem.objects.iter().any(|o| o.name.node == name);
        let check = |atom: &Spanned<AstAtom>, diags: &mut Vec<Diagnostic>| {
            for arg in &atom.args {
                match arg {
                    Term::Constant(c) if !declared(c) => diags.push(Diagnostic {
                        severity: Severity::Error,
                        message: format!("undeclared object `{c}`"),
                        line: atom.line,
                        column: atom.column,
                    }),
                    Term::Constant(_) => {}
                    Term::Variable(v) => diags.push(Diagnostic {
                        severity: Severity::Error,
                        message: format!("variable `{v}` is not allowed here"),
                        line: atom.line,
                        column: atom.column,
                    }),
                }
            }
        };
        let mut diags = Vec::new();
        for atom in &problem.init {
            check(atom, &mut diags);
        }
        for lit in &problem.goal {
            check(&lit.atom, &mut diags);
        }
        self.diagnostics.extend(diags);
    }
}

/// Parses a planning-domain document. Errors never abort the pass: the parser
/// recovers at the next top-level form and keeps collecting diagnostics.
pub fn parse_domain(text: &str) -> (Option<DomainAst>, Vec<Diagnostic>) {
    Parser::new(text).parse_domain()
}

/// Parses a problem document; see [`parse_domain`] for the error contract.
pub fn parse_problem(text: &str) -> (Option<ProblemAst>, Vec<Diagnostic>) {
    Parser::new(text).parse_problem()
}
