//! Reader for Turtle documents. N-Triples is a syntactic subset and goes
//! through the same reader.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::vocab::{rdf, xsd};
use super::{Literal, MetaGraph, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct RdfParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses a Turtle (or N-Triples) document. Declared prefixes are kept on
/// the returned graph.
pub fn parse(input: &str) -> Result<MetaGraph, RdfParseError> {
    let mut p = Parser {
        src: input,
        pos: 0,
        prefixes: Vec::new(),
        base: None,
        graph: MetaGraph::new(),
        fresh: 0,
    };
    p.document()?;
    let mut graph = p.graph;
    for (prefix, ns) in p.prefixes {
        graph.add_prefix(&prefix, &ns);
    }
    Ok(graph)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    prefixes: Vec<(String, String)>,
    base: Option<String>,
    graph: MetaGraph,
    fresh: usize,
}

type PResult<T> = Result<T, RdfParseError>;

fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic()
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c) || c.is_ascii_digit() || c == '-' || c == '\u{B7}' || c.is_numeric()
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> RdfParseError {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        RdfParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}`, found end of input"),
            }))
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn keyword_ci(&self, kw: &str) -> bool {
        let r = self.rest();
        r.len() >= kw.len()
            && r.is_char_boundary(kw.len())
            && r[..kw.len()].eq_ignore_ascii_case(kw)
            && r[kw.len()..]
                .chars()
                .next()
                .is_some_and(char::is_whitespace)
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.rest().starts_with("@prefix") {
                self.pos += "@prefix".len();
                self.prefix_decl()?;
                self.skip_ws();
                self.expect('.')?;
            } else if self.rest().starts_with("@base") {
                self.pos += "@base".len();
                self.skip_ws();
                let iri = self.iriref()?;
                self.base = Some(iri);
                self.skip_ws();
                self.expect('.')?;
            } else if self.keyword_ci("PREFIX") {
                self.pos += "PREFIX".len();
                self.prefix_decl()?;
            } else if self.keyword_ci("BASE") {
                self.pos += "BASE".len();
                self.skip_ws();
                let iri = self.iriref()?;
                self.base = Some(iri);
            } else {
                self.triples()?;
                self.skip_ws();
                self.expect('.')?;
            }
        }
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        self.skip_ws();
        let prefix = self.pn_prefix();
        self.expect(':')?;
        self.skip_ws();
        let ns = self.iriref()?;
        if let Some(slot) = self.prefixes.iter_mut().find(|(p, _)| *p == prefix) {
            slot.1 = ns;
        } else {
            self.prefixes.push((prefix, ns));
        }
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        if self.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.skip_ws();
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') => self.blank_label(),
            Some('(') => self.collection(),
            _ => Ok(Term::Iri(self.prefixed_name()?)),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            self.skip_ws();
            let verb = self.verb()?;
            self.object_list(subject, &verb)?;
            self.skip_ws();
            if !self.eat(';') {
                return Ok(());
            }
            loop {
                self.skip_ws();
                if !self.eat(';') {
                    break;
                }
            }
            self.skip_ws();
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &str) -> PResult<()> {
        loop {
            self.skip_ws();
            let object = self.object()?;
            self.graph
                .insert(Triple::new(subject.clone(), predicate, object));
            self.skip_ws();
            if !self.eat(',') {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> PResult<String> {
        if self.peek() == Some('a')
            && !self
                .peek_at(1)
                .is_some_and(|c| is_pn_chars(c) || c == ':' || c == '.')
        {
            self.bump();
            return Ok(rdf::TYPE.into());
        }
        self.iri()
    }

    fn iri(&mut self) -> PResult<String> {
        if self.peek() == Some('<') {
            self.iriref()
        } else {
            self.prefixed_name()
        }
    }

    fn object(&mut self) -> PResult<Term> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.numeric(),
            Some(_) => {
                for (word, value) in [("true", "true"), ("false", "false")] {
                    if self.rest().starts_with(word)
                        && !self.rest()[word.len()..]
                            .chars()
                            .next()
                            .is_some_and(|c| is_pn_chars(c) || c == ':')
                    {
                        self.pos += word.len();
                        return Ok(Term::Literal(Literal::typed(value, xsd::BOOLEAN)));
                    }
                }
                Ok(Term::Iri(self.prefixed_name()?))
            }
            None => Err(self.error("expected an object, found end of input")),
        }
    }

    fn fresh_blank(&mut self) -> Term {
        self.fresh += 1;
        Term::Blank(format!("genid{}", self.fresh))
    }

    fn blank_label(&mut self) -> PResult<Term> {
        self.expect('_')?;
        self.expect(':')?;
        let start = self.pos;
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                self.bump();
            }
            _ => return Err(self.error("invalid blank node label")),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                self.bump();
            } else {
                break;
            }
        }
        while self.src[start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        Ok(Term::Blank(self.src[start..self.pos].to_string()))
    }

    fn blank_property_list(&mut self) -> PResult<Term> {
        self.expect('[')?;
        let node = self.fresh_blank();
        self.skip_ws();
        if self.eat(']') {
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.skip_ws();
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> PResult<Term> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.eat(')') {
                break;
            }
            items.push(self.object()?);
        }
        let mut head = Term::iri(rdf::NIL);
        for item in items.into_iter().rev() {
            let node = self.fresh_blank();
            self.graph
                .insert(Triple::new(node.clone(), rdf::FIRST, item));
            self.graph
                .insert(Triple::new(node.clone(), rdf::REST, head));
            head = node;
        }
        Ok(head)
    }

    fn rdf_literal(&mut self) -> PResult<Term> {
        let lexical = self.string()?;
        if self.peek() == Some('@') {
            self.bump();
            let start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '-' {
                    self.bump();
                } else {
                    break;
                }
            }
            let tag = &self.src[start..self.pos];
            if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return Err(self.error("invalid language tag"));
            }
            return Ok(Term::Literal(Literal::lang(
                lexical,
                tag.to_ascii_lowercase(),
            )));
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            let dt = self.iri()?;
            return Ok(Term::Literal(Literal::typed(lexical, &dt)));
        }
        Ok(Term::Literal(Literal::string(lexical)))
    }

    fn string(&mut self) -> PResult<String> {
        let quote = self.bump().ok_or_else(|| self.error("expected string"))?;
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let c = self
                .bump()
                .ok_or_else(|| self.error("unterminated string literal"))?;
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    // a run of more than three quotes ends with the last three
                    while self.peek_at(2) == Some(quote) {
                        out.push(quote);
                        self.bump();
                    }
                    self.bump();
                    self.bump();
                    return Ok(out);
                }
                out.push(c);
                continue;
            }
            match c {
                '\\' => out.push(self.escape()?),
                '\n' | '\r' if !long => return Err(self.error("newline in short string literal")),
                c => out.push(c),
            }
        }
    }

    fn escape(&mut self) -> PResult<char> {
        let c = self.bump().ok_or_else(|| self.error("dangling escape"))?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' => self.hex_char(4)?,
            'U' => self.hex_char(8)?,
            other => return Err(self.error(format!("invalid escape `\\{other}`"))),
        })
    }

    fn hex_char(&mut self, n: usize) -> PResult<char> {
        let r = self.rest();
        if r.len() < n || !r.is_char_boundary(n) {
            return Err(self.error("truncated unicode escape"));
        }
        let code =
            u32::from_str_radix(&r[..n], 16).map_err(|_| self.error("invalid unicode escape"))?;
        self.pos += n;
        char::from_u32(code).ok_or_else(|| self.error("invalid code point"))
    }

    fn numeric(&mut self) -> PResult<Term> {
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.bump();
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.bump();
            }
            p.pos - s
        };
        let int_digits = digits(self);
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            digits(self);
            datatype = xsd::DECIMAL;
        } else if int_digits == 0 {
            return Err(self.error("invalid numeric literal"));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if digits(self) == 0 {
                return Err(self.error("invalid exponent"));
            }
            datatype = xsd::DOUBLE;
        }
        Ok(Term::Literal(Literal::typed(
            &self.src[start..self.pos],
            datatype,
        )))
    }

    fn iriref(&mut self) -> PResult<String> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.hex_char(4)?),
                    Some('U') => out.push(self.hex_char(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c)
                    if c.is_whitespace()
                        || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') =>
                {
                    return Err(self.error(format!("invalid character `{c}` in IRI")))
                }
                Some(c) => out.push(c),
            }
        }
        Ok(self.resolve(out))
    }

    fn resolve(&self, iri: String) -> String {
        let Some(base) = &self.base else { return iri };
        let has_scheme = iri.find(':').is_some_and(|i| {
            iri[..i]
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
                && i > 0
        });
        if has_scheme {
            return iri;
        }
        if iri.is_empty() {
            return base.clone();
        }
        if iri.starts_with('#') {
            let stem = base.split('#').next().unwrap_or(base);
            return format!("{stem}{iri}");
        }
        if iri.starts_with('/') {
            // keep scheme://authority
            if let Some(idx) = base.find("://") {
                let after = idx + 3;
                let end = base[after..].find('/').map_or(base.len(), |i| after + i);
                return format!("{}{iri}", &base[..end]);
            }
        }
        let stem = base.rfind('/').map_or(base.as_str(), |i| &base[..=i]);
        format!("{stem}{iri}")
    }

    fn pn_prefix(&mut self) -> String {
        let start = self.pos;
        if self.peek().is_some_and(is_pn_chars_base) {
            while self.peek().is_some_and(|c| is_pn_chars(c) || c == '.') {
                self.bump();
            }
            while self.src[start..self.pos].ends_with('.') {
                self.pos -= 1;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn prefixed_name(&mut self) -> PResult<String> {
        let start = self.pos;
        let prefix = self.pn_prefix();
        if !self.eat(':') {
            self.pos = start;
            return Err(self.error(match self.peek() {
                Some(c) => format!("unexpected `{c}`"),
                None => "unexpected end of input".to_string(),
            }));
        }
        let ns = self
            .prefixes
            .iter()
            .find(|(p, _)| *p == prefix)
            .map(|(_, ns)| ns.clone())
            .ok_or_else(|| {
                let mut e = self.error(format!("undeclared prefix `{prefix}:`"));
                e.column = e.column.saturating_sub(prefix.chars().count() + 1);
                e
            })?;
        let mut local = String::new();
        let mut committed_len = 0;
        let mut committed_pos = self.pos;
        let mut first = true;
        while let Some(c) = self.peek() {
            let ok_first = is_pn_chars_u(c) || c == ':' || c.is_ascii_digit();
            if c == '%' {
                let r = self.rest();
                let hex = r.len() >= 3
                    && r.as_bytes()[1].is_ascii_hexdigit()
                    && r.as_bytes()[2].is_ascii_hexdigit();
                if !hex {
                    return Err(self.error("invalid percent escape in local name"));
                }
                local.push_str(&r[..3]);
                self.pos += 3;
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return Err(self.error("invalid escape in local name")),
                }
            } else if (first && ok_first) || (!first && (is_pn_chars(c) || c == ':' || c == '.')) {
                local.push(c);
                self.bump();
            } else {
                break;
            }
            first = false;
            if !local.ends_with('.') {
                committed_len = local.len();
                committed_pos = self.pos;
            }
        }
        // a trailing '.' belongs to the statement terminator
        local.truncate(committed_len);
        self.pos = committed_pos;
        Ok(format!("{ns}{local}"))
    }
}
