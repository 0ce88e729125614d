//! Structural scan of a token stream into class sketches.
//!
//! Recognizes package declarations, top-level type declarations with their
//! annotations, fields, method signatures and, inside method bodies, the
//! invocations and assignments needed for call extraction. It is not a Java
//! parser: anything it does not recognize is skipped to the next `;` or
//! balanced block.

use std::fmt;
use std::path::PathBuf;

use super::lexer::{Token, TokenKind};
use crate::model::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
    Record,
    Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationArg {
    pub key: Option<String>,
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub name: String,
    pub args: Vec<AnnotationArg>,
}

impl Annotation {
    /// The argument stored under one of `keys`; an unnamed argument answers
    /// for any key.
    pub fn arg(&self, keys: &[impl AsRef<str>]) -> Option<&AnnotationArg> {
        self.args.iter().find(|a| match &a.key {
            None => true,
            Some(k) => keys.iter().any(|x| x.as_ref() == k),
        })
    }

    pub fn named_arg(&self, key: &str) -> Option<&AnnotationArg> {
        self.args.iter().find(|a| a.key.as_deref() == Some(key))
    }

    /// String literals of the argument under `keys`.
    pub fn strings(&self, keys: &[impl AsRef<str>]) -> Vec<String> {
        self.arg(keys)
            .map(|a| {
                a.tokens
                    .iter()
                    .filter(|t| t.kind == TokenKind::Str)
                    .map(|t| t.text.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A type expression such as `List<Map<String, Foo>>[]`. Names are simple
/// (the last segment of a qualified name).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeRef {
    pub name: String,
    pub args: Vec<TypeRef>,
    pub array_dims: usize,
}

impl TypeRef {
    pub fn simple(name: impl Into<String>) -> Self {
        TypeRef {
            name: name.into(),
            ..TypeRef::default()
        }
    }

    /// Every type name mentioned, outermost first.
    pub fn names(&self) -> Vec<&str> {
        let mut out = vec![self.name.as_str()];
        for a in &self.args {
            out.extend(a.names());
        }
        out
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("<")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(">")?;
        }
        for _ in 0..self.array_dims {
            f.write_str("[]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSketch {
    pub annotations: Vec<Annotation>,
    pub type_ref: TypeRef,
    pub name: String,
}

/// A `receiver.name(args)` call inside a method body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub name: String,
    pub receiver: Option<String>,
    pub arguments: Vec<Vec<Token>>,
    pub line: u32,
    pub position: usize,
}

/// `name = expr` inside a body, or a field initializer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub name: String,
    pub expr: Vec<Token>,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodSketch {
    pub name: String,
    pub return_type: TypeRef,
    pub params: Vec<ParamSketch>,
    pub annotations: Vec<Annotation>,
    pub invocations: Vec<Invocation>,
    pub assignments: Vec<Assignment>,
    /// `(name, type)` of local variable declarations.
    pub locals: Vec<(String, String)>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSketch {
    pub qualified_name: String,
    pub simple_name: String,
    pub kind: TypeKind,
    pub annotations: Vec<Annotation>,
    /// Instance fields; collection types are unwrapped to their element type.
    pub fields: Vec<Field>,
    /// Static fields.
    pub static_fields: Vec<Field>,
    /// Field initializers, static or not.
    pub constants: Vec<Assignment>,
    pub methods: Vec<MethodSketch>,
    /// Source file, relative to the scanned root.
    pub file: PathBuf,
    pub line: u32,
}

impl ClassSketch {
    pub fn annotation(&self, name: &str) -> Option<&Annotation> {
        self.annotations.iter().find(|a| a.name == name)
    }

    pub fn has_any_annotation(&self, names: &[String]) -> bool {
        self.annotations.iter().any(|a| names.contains(&a.name))
    }

    pub fn annotation_names(&self) -> Vec<&str> {
        self.annotations.iter().map(|a| a.name.as_str()).collect()
    }

    /// `(name, return type, parameter types)` for every method.
    pub fn method_signatures(&self) -> Vec<(String, String, Vec<String>)> {
        self.methods
            .iter()
            .map(|m| {
                (
                    m.name.clone(),
                    m.return_type.to_string(),
                    m.params.iter().map(|p| p.type_ref.to_string()).collect(),
                )
            })
            .collect()
    }

    /// Declared type of a field (instance or static).
    pub fn field_type(&self, name: &str) -> Option<&str> {
        self.fields
            .iter()
            .chain(&self.static_fields)
            .find(|f| f.name == name)
            .map(|f| f.type_name.as_str())
    }

    pub fn locator(&self, line: u32) -> String {
        format!("{}:{}", self.file.to_string_lossy().replace('\\', "/"), line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub message: String,
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
    "non",
];

const COLLECTIONS: &[&str] = &[
    "List",
    "ArrayList",
    "LinkedList",
    "Set",
    "HashSet",
    "TreeSet",
    "LinkedHashSet",
    "SortedSet",
    "Collection",
    "Iterable",
    "Queue",
    "Deque",
    "Vector",
];

const MAPS: &[&str] = &["Map", "HashMap", "TreeMap", "LinkedHashMap", "SortedMap", "ConcurrentHashMap"];

/// Field view of a declared type: element type unwrapped for collections,
/// arrays and map values.
pub fn field_of(type_ref: &TypeRef, name: &str) -> Field {
    if type_ref.array_dims > 0 {
        let element = TypeRef {
            array_dims: type_ref.array_dims - 1,
            ..type_ref.clone()
        };
        let inner = field_of(&element, name);
        return Field::collection(inner.type_name, name);
    }
    let element = if COLLECTIONS.contains(&type_ref.name.as_str()) {
        type_ref.args.first()
    } else if MAPS.contains(&type_ref.name.as_str()) {
        type_ref.args.get(1)
    } else {
        None
    };
    match element {
        Some(e) => Field::collection(field_of(e, name).type_name, name),
        None if COLLECTIONS.contains(&type_ref.name.as_str()) => Field::collection("Object", name),
        None => Field::new(type_ref.to_string(), name),
    }
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + offset)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().is_some_and(|t| t.is_punct(c))
    }

    fn at_ident(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.is_ident(s))
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.at_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn line(&self) -> u32 {
        self.peek()
            .or_else(|| self.toks.last())
            .map_or(0, |t| t.line)
    }

    fn ident(&mut self) -> Option<&'a str> {
        let t = self.peek()?;
        let id = t.ident()?;
        self.pos += 1;
        Some(id)
    }

    /// At an opening delimiter: returns the tokens strictly inside the
    /// balanced pair and moves past the closing one.
    fn balanced(&mut self, open: char, close: char) -> Result<&'a [Token], ParseError> {
        let line = self.line();
        debug_assert!(self.at_punct(open));
        let start = self.pos + 1;
        let mut depth = 0usize;
        while let Some(t) = self.bump() {
            if t.is_punct(open) {
                depth += 1;
            } else if t.is_punct(close) {
                depth -= 1;
                if depth == 0 {
                    return Ok(&self.toks[start..self.pos - 1]);
                }
            }
        }
        Err(ParseError {
            line,
            message: format!("unbalanced `{open}`"),
        })
    }

    /// Skips to just past the next `;` or balanced `{}` block at depth zero.
    fn skip_statement(&mut self) -> Result<(), ParseError> {
        while let Some(t) = self.peek() {
            if t.is_punct(';') {
                self.pos += 1;
                return Ok(());
            }
            if t.is_punct('{') {
                self.balanced('{', '}')?;
                return Ok(());
            }
            if t.is_punct('(') {
                self.balanced('(', ')')?;
                continue;
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn skip_modifiers(&mut self) -> bool {
        let mut is_static = false;
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::Ident && MODIFIERS.contains(&t.text.as_str()) => {
                    if t.text == "static" {
                        is_static = true;
                    }
                    // `non-sealed`
                    if t.text == "non" && self.peek_at(1).is_some_and(|t| t.is_punct('-')) {
                        self.pos += 2;
                    }
                    self.pos += 1;
                }
                _ => return is_static,
            }
        }
    }

    fn annotations(&mut self) -> Result<Vec<Annotation>, ParseError> {
        let mut out = Vec::new();
        while self.at_punct('@') && !self.peek_at(1).is_some_and(|t| t.is_ident("interface")) {
            self.pos += 1;
            let mut name = match self.ident() {
                Some(n) => n,
                None => break,
            };
            while self.at_punct('.') && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident) {
                self.pos += 1;
                name = self.ident().unwrap_or(name);
            }
            let args = if self.at_punct('(') {
                parse_annotation_args(self.balanced('(', ')')?)
            } else {
                Vec::new()
            };
            out.push(Annotation {
                name: name.to_string(),
                args,
            });
        }
        Ok(out)
    }

    fn type_ref(&mut self) -> Option<TypeRef> {
        let save = self.pos;
        let _ = self.annotations();
        let mut name = match self.ident() {
            Some(n) => n.to_string(),
            None => {
                self.pos = save;
                return None;
            }
        };
        let mut args = Vec::new();
        loop {
            if self.at_punct('<') {
                match self.type_args() {
                    Some(a) => args = a,
                    None => {
                        self.pos = save;
                        return None;
                    }
                }
            }
            if self.at_punct('.') && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident) {
                self.pos += 1;
                name = self.ident().unwrap_or_default().to_string();
                args = Vec::new();
                continue;
            }
            break;
        }
        let mut array_dims = 0;
        loop {
            if self.at_punct('[') && self.peek_at(1).is_some_and(|t| t.is_punct(']')) {
                self.pos += 2;
                array_dims += 1;
            } else if self.at_punct('.')
                && self.peek_at(1).is_some_and(|t| t.is_punct('.'))
                && self.peek_at(2).is_some_and(|t| t.is_punct('.'))
            {
                self.pos += 3;
                array_dims += 1;
            } else {
                break;
            }
        }
        Some(TypeRef {
            name,
            args,
            array_dims,
        })
    }

    fn type_args(&mut self) -> Option<Vec<TypeRef>> {
        self.eat_punct('<');
        let mut args = Vec::new();
        loop {
            if self.eat_punct('>') {
                return Some(args);
            }
            if self.eat_punct('?') {
                if self.at_ident("extends") || self.at_ident("super") {
                    self.pos += 1;
                    args.push(self.type_ref()?);
                } else {
                    args.push(TypeRef::simple("Object"));
                }
            } else {
                args.push(self.type_ref()?);
            }
            while self.eat_punct('&') {
                self.type_ref()?;
            }
            if !self.eat_punct(',') && !self.at_punct('>') {
                return None;
            }
        }
    }

    fn params(&mut self) -> Result<Vec<ParamSketch>, ParseError> {
        let inner = self.balanced('(', ')')?;
        let mut c = Cursor::new(inner);
        let mut out = Vec::new();
        while c.peek().is_some() {
            let annotations = c.annotations()?;
            c.skip_modifiers();
            let Some(type_ref) = c.type_ref() else { break };
            let Some(name) = c.ident() else { break };
            let mut type_ref = type_ref;
            while c.at_punct('[') && c.peek_at(1).is_some_and(|t| t.is_punct(']')) {
                c.pos += 2;
                type_ref.array_dims += 1;
            }
            out.push(ParamSketch {
                annotations,
                type_ref,
                name: name.to_string(),
            });
            if !c.eat_punct(',') {
                break;
            }
        }
        Ok(out)
    }
}

fn parse_annotation_args(inner: &[Token]) -> Vec<AnnotationArg> {
    split_top_level(inner, ',')
        .into_iter()
        .filter(|part| !part.is_empty())
        .map(|part| {
            if part.len() >= 2 && part[0].kind == TokenKind::Ident && part[1].is_punct('=') {
                AnnotationArg {
                    key: Some(part[0].text.clone()),
                    tokens: part[2..].to_vec(),
                }
            } else {
                AnnotationArg {
                    key: None,
                    tokens: part.to_vec(),
                }
            }
        })
        .collect()
}

/// Whether `<` at `idx` plausibly opens a type argument list.
fn opens_generic(toks: &[Token], idx: usize) -> bool {
    let prev_is_type = idx
        .checked_sub(1)
        .and_then(|p| toks.get(p))
        .and_then(Token::ident)
        .is_some_and(|s| s.starts_with(|c: char| c.is_uppercase()));
    let next_ok = toks
        .get(idx + 1)
        .is_some_and(|t| t.is_punct('>') || t.is_punct('?') || t.kind == TokenKind::Ident);
    prev_is_type && next_ok
}

/// Splits on `sep` outside parentheses, brackets, braces and type-argument
/// lists.
pub fn split_top_level(toks: &[Token], sep: char) -> Vec<&[Token]> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut angle = 0i32;
    let mut start = 0;
    for (i, t) in toks.iter().enumerate() {
        if t.kind != TokenKind::Punct {
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            "<" if opens_generic(toks, i) => angle += 1,
            ">" if angle > 0 => angle -= 1,
            s if depth == 0 && angle == 0 && s.starts_with(sep) => {
                parts.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&toks[start..]);
    parts
}

/// Parses one source file into sketches of its top-level types.
pub fn parse_compilation_unit(
    toks: &[Token],
    file: PathBuf,
    invocation_filter: &dyn Fn(&str) -> bool,
) -> Result<Vec<ClassSketch>, ParseError> {
    let mut c = Cursor::new(toks);
    let mut package = String::new();
    let mut out = Vec::new();
    while c.peek().is_some() {
        if c.eat_punct(';') {
            continue;
        }
        if c.at_ident("package") || c.at_ident("import") {
            let is_package = c.at_ident("package");
            c.pos += 1;
            let mut name = String::new();
            while let Some(t) = c.bump() {
                if t.is_punct(';') {
                    break;
                }
                name.push_str(&t.text);
            }
            if is_package {
                package = name;
            }
            continue;
        }
        let annotations = c.annotations()?;
        c.skip_modifiers();
        if let Some(sketch) = type_decl(&mut c, annotations, &package, &file, invocation_filter)? {
            out.push(sketch);
        } else if c.peek().is_some() {
            c.pos += 1;
        }
    }
    Ok(out)
}

fn type_kind(c: &mut Cursor<'_>) -> Option<TypeKind> {
    if c.at_punct('@') && c.peek_at(1).is_some_and(|t| t.is_ident("interface")) {
        c.pos += 2;
        return Some(TypeKind::Annotation);
    }
    let kind = match c.peek()?.ident()? {
        "class" => TypeKind::Class,
        "interface" => TypeKind::Interface,
        "enum" => TypeKind::Enum,
        "record" if c.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident) => TypeKind::Record,
        _ => return None,
    };
    c.pos += 1;
    Some(kind)
}

fn type_decl(
    c: &mut Cursor<'_>,
    annotations: Vec<Annotation>,
    package: &str,
    file: &std::path::Path,
    invocation_filter: &dyn Fn(&str) -> bool,
) -> Result<Option<ClassSketch>, ParseError> {
    let line = c.line();
    let Some(kind) = type_kind(c) else {
        return Ok(None);
    };
    let name = c
        .ident()
        .ok_or_else(|| ParseError {
            line,
            message: "type declaration without a name".into(),
        })?
        .to_string();
    let mut sketch = ClassSketch {
        qualified_name: if package.is_empty() {
            name.clone()
        } else {
            format!("{package}.{name}")
        },
        simple_name: name.clone(),
        kind,
        annotations,
        fields: Vec::new(),
        static_fields: Vec::new(),
        constants: Vec::new(),
        methods: Vec::new(),
        file: file.to_path_buf(),
        line,
    };
    if c.at_punct('<') {
        c.balanced('<', '>')?;
    }
    if kind == TypeKind::Record && c.at_punct('(') {
        for p in c.params()? {
            sketch.fields.push(field_of(&p.type_ref, &p.name));
        }
    }
    while c.peek().is_some() && !c.at_punct('{') {
        c.pos += 1;
    }
    if !c.at_punct('{') {
        return Err(ParseError {
            line,
            message: format!("type `{name}` has no body"),
        });
    }
    let body = c.balanced('{', '}')?;
    parse_body(body, &mut sketch, invocation_filter)?;
    Ok(Some(sketch))
}

fn parse_body(
    body: &[Token],
    sketch: &mut ClassSketch,
    invocation_filter: &dyn Fn(&str) -> bool,
) -> Result<(), ParseError> {
    let mut c = Cursor::new(body);
    if sketch.kind == TypeKind::Enum {
        // Constants run up to the first `;` at depth zero.
        loop {
            match c.peek() {
                None => return Ok(()),
                Some(t) if t.is_punct(';') => {
                    c.pos += 1;
                    break;
                }
                Some(t) if t.is_punct('(') => {
                    c.balanced('(', ')')?;
                }
                Some(t) if t.is_punct('{') => {
                    c.balanced('{', '}')?;
                }
                Some(_) => c.pos += 1,
            }
        }
    }
    let implicit_static = matches!(sketch.kind, TypeKind::Interface | TypeKind::Annotation);
    while c.peek().is_some() {
        if c.eat_punct(';') {
            continue;
        }
        let line = c.line();
        let annotations = c.annotations()?;
        let is_static = c.skip_modifiers() || implicit_static;
        if c.at_punct('{') {
            c.balanced('{', '}')?;
            continue;
        }
        if type_kind(&mut c).is_some() {
            // Nested type: skip its header and body.
            c.skip_statement()?;
            continue;
        }
        if c.at_punct('<') {
            c.balanced('<', '>')?;
        }
        if c.peek().is_some_and(|t| t.is_ident(&sketch.simple_name))
            && c.peek_at(1).is_some_and(|t| t.is_punct('('))
        {
            // Constructor.
            c.pos += 1;
            c.balanced('(', ')')?;
            c.skip_statement()?;
            continue;
        }
        let Some(type_ref) = c.type_ref() else {
            c.skip_statement()?;
            continue;
        };
        let Some(name) = c.ident() else {
            c.skip_statement()?;
            continue;
        };
        if c.at_punct('(') {
            let params = c.params()?;
            while let Some(t) = c.peek() {
                if t.is_punct('{') || t.is_punct(';') || t.is_ident("default") {
                    break;
                }
                c.pos += 1;
            }
            let mut method = MethodSketch {
                name: name.to_string(),
                return_type: type_ref,
                params,
                annotations,
                invocations: Vec::new(),
                assignments: Vec::new(),
                locals: Vec::new(),
                line,
            };
            if c.at_punct('{') {
                let body = c.balanced('{', '}')?;
                scan_method_body(body, &mut method, invocation_filter);
            } else {
                c.skip_statement()?;
            }
            sketch.methods.push(method);
            continue;
        }
        field_declarators(&mut c, type_ref, name, is_static, sketch);
    }
    Ok(())
}

fn field_declarators(
    c: &mut Cursor<'_>,
    type_ref: TypeRef,
    first_name: &str,
    is_static: bool,
    sketch: &mut ClassSketch,
) {
    let mut name = first_name.to_string();
    loop {
        let mut ty = type_ref.clone();
        while c.at_punct('[') && c.peek_at(1).is_some_and(|t| t.is_punct(']')) {
            c.pos += 2;
            ty.array_dims += 1;
        }
        let field = field_of(&ty, &name);
        if c.eat_punct('=') {
            let start = c.pos;
            let mut depth = 0i32;
            while let Some(t) = c.peek() {
                if depth == 0 && t.is_punct(';') {
                    break;
                }
                if depth == 0 && t.is_punct(',') && next_is_declarator(c.toks, c.pos + 1) {
                    break;
                }
                match t.text.as_str() {
                    "(" | "[" | "{" if t.kind == TokenKind::Punct => depth += 1,
                    ")" | "]" | "}" if t.kind == TokenKind::Punct => depth -= 1,
                    _ => {}
                }
                c.pos += 1;
            }
            sketch.constants.push(Assignment {
                name: name.clone(),
                expr: c.toks[start..c.pos].to_vec(),
                position: 0,
            });
        }
        if is_static {
            sketch.static_fields.push(field);
        } else {
            sketch.fields.push(field);
        }
        if c.eat_punct(',') {
            if let Some(n) = c.ident() {
                name = n.to_string();
                continue;
            }
        }
        c.eat_punct(';');
        return;
    }
}

fn next_is_declarator(toks: &[Token], idx: usize) -> bool {
    toks.get(idx).is_some_and(|t| t.kind == TokenKind::Ident)
        && toks
            .get(idx + 1)
            .is_some_and(|t| t.is_punct('=') || t.is_punct(',') || t.is_punct(';') || t.is_punct('['))
}

fn scan_method_body(body: &[Token], method: &mut MethodSketch, invocation_filter: &dyn Fn(&str) -> bool) {
    for (i, t) in body.iter().enumerate() {
        let Some(id) = t.ident() else { continue };
        let next = body.get(i + 1);
        let prev = i.checked_sub(1).and_then(|p| body.get(p));

        if next.is_some_and(|n| n.is_punct('('))
            && prev.is_some_and(|p| p.is_punct('.'))
            && invocation_filter(id)
        {
            let receiver = i
                .checked_sub(2)
                .and_then(|p| body.get(p))
                .and_then(Token::ident)
                .map(str::to_string);
            let mut c = Cursor::new(&body[i + 1..]);
            if let Ok(inner) = c.balanced('(', ')') {
                let arguments = if inner.is_empty() {
                    Vec::new()
                } else {
                    split_top_level(inner, ',').into_iter().map(<[Token]>::to_vec).collect()
                };
                method.invocations.push(Invocation {
                    name: id.to_string(),
                    receiver,
                    arguments,
                    line: t.line,
                    position: i,
                });
            }
        }

        let is_assign = next.is_some_and(|n| n.is_punct('='))
            && !body.get(i + 2).is_some_and(|n| n.is_punct('='));
        if is_assign {
            let start = i + 2;
            let mut depth = 0i32;
            let mut end = start;
            while let Some(tok) = body.get(end) {
                if tok.kind == TokenKind::Punct {
                    match tok.text.as_str() {
                        ";" if depth == 0 => break,
                        "(" | "[" | "{" => depth += 1,
                        ")" | "]" | "}" => {
                            if depth == 0 {
                                break;
                            }
                            depth -= 1
                        }
                        _ => {}
                    }
                }
                end += 1;
            }
            method.assignments.push(Assignment {
                name: id.to_string(),
                expr: body[start..end].to_vec(),
                position: i,
            });
        }

        let declares = prev
            .and_then(Token::ident)
            .is_some_and(|p| p.starts_with(|c: char| c.is_uppercase()) && p != "return" && p != "new")
            && next.is_some_and(|n| {
                n.is_punct('=') || n.is_punct(';') || n.is_punct(':') || n.is_punct(',') || n.is_punct(')')
            });
        if declares {
            let ty = prev.map(|p| p.text.clone()).unwrap_or_default();
            method.locals.push((id.to_string(), ty));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn parse(src: &str) -> Vec<ClassSketch> {
        let toks = tokenize(src).unwrap();
        parse_compilation_unit(&toks, PathBuf::from("A.java"), &|n: &str| {
            matches!(n, "getForObject" | "exchange" | "put")
        })
        .unwrap()
    }

    #[test]
    fn data_class_with_two_fields() {
        let s = parse(
            "package p.q;\nimport lombok.Data;\n@Data\npublic class Food {\n private String name;\n private int price;\n}",
        );
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].qualified_name, "p.q.Food");
        assert_eq!(s[0].simple_name, "Food");
        assert_eq!(s[0].annotation_names(), ["Data"]);
        assert_eq!(s[0].fields, vec![Field::new("String", "name"), Field::new("int", "price")]);
    }

    #[test]
    fn collections_are_unwrapped() {
        let s = parse(
            "class A { List<OrderLine> lines; Set<? extends Item> items; Map<String, Seat> seats; \
             Station[] stops; Optional<Train> train; java.util.List<java.util.UUID> ids; int a, b = 3, c; }",
        );
        let f = &s[0].fields;
        assert_eq!(f[0], Field::collection("OrderLine", "lines"));
        assert_eq!(f[1], Field::collection("Item", "items"));
        assert_eq!(f[2], Field::collection("Seat", "seats"));
        assert_eq!(f[3], Field::collection("Station", "stops"));
        assert_eq!(f[4], Field::new("Optional<Train>", "train"));
        assert_eq!(f[5], Field::collection("UUID", "ids"));
        assert_eq!(f.iter().skip(6).map(|f| f.name.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
    }

    #[test]
    fn static_fields_and_initializers() {
        let s = parse(
            "class A { private static final String URL = \"http://x\"; private Map<String, Integer> m = new HashMap<String, Integer>(); \
             static { init(); } { other(); } }",
        );
        assert!(s[0].fields.iter().all(|f| f.name != "URL"));
        assert_eq!(s[0].static_fields[0].name, "URL");
        assert_eq!(s[0].fields.len(), 1);
        assert_eq!(s[0].constants[0].name, "URL");
        assert_eq!(s[0].constants[0].expr[0].text, "http://x");
    }

    #[test]
    fn methods_params_and_annotations() {
        let s = parse(
            r#"@RestController @RequestMapping("/api") class C {
                 public C(Service s) { this.s = s; }
                 @GetMapping(value = "/x/{id}") public ResponseEntity<List<Foo>> get(@PathVariable("id") final UUID id, @RequestParam(name = "q", required = false) String q) throws IOException { return null; }
                 abstract <T> T generic(T[] arr, int... rest);
               }"#,
        );
        let c = &s[0];
        assert_eq!(c.annotation_names(), ["RestController", "RequestMapping"]);
        assert_eq!(c.methods.len(), 2);
        let m = &c.methods[0];
        assert_eq!(m.name, "get");
        assert_eq!(m.return_type.to_string(), "ResponseEntity<List<Foo>>");
        assert_eq!(m.annotations[0].strings(&["value", "path"]), ["/x/{id}"]);
        assert_eq!(m.params.len(), 2);
        assert_eq!(m.params[0].annotations[0].strings(&["value", "name"]), ["id"]);
        assert_eq!(m.params[1].annotations[0].named_arg("name").unwrap().tokens[0].text, "q");
        let sigs = c.method_signatures();
        assert_eq!(sigs[1], ("generic".into(), "T".into(), vec!["T[]".into(), "int[]".into()]));
    }

    #[test]
    fn invocations_and_assignments_in_bodies() {
        let s = parse(
            r#"class S {
                 private RestTemplate restTemplate;
                 void run(String id) {
                   String url = "http://svc/a/" + id;
                   Foo f = restTemplate.getForObject(url, Foo.class);
                   this.restTemplate.exchange("http://svc/b", HttpMethod.POST, new HttpEntity<>(f, headers), new ParameterizedTypeReference<Response<List<Foo>>>() {});
                   map.put(a, b);
                 }
               }"#,
        );
        let m = &s[0].methods[0];
        assert_eq!(m.invocations.len(), 3);
        assert_eq!(m.invocations[0].receiver.as_deref(), Some("restTemplate"));
        assert_eq!(m.invocations[0].arguments.len(), 2);
        assert_eq!(m.invocations[1].receiver.as_deref(), Some("restTemplate"));
        assert_eq!(m.invocations[1].arguments.len(), 4);
        assert_eq!(m.invocations[2].receiver.as_deref(), Some("map"));
        assert_eq!(m.assignments[0].name, "url");
        assert!(m.locals.contains(&("url".to_string(), "String".to_string())));
        assert_eq!(s[0].field_type("restTemplate"), Some("RestTemplate"));
    }

    #[test]
    fn nested_and_multiple_top_level_types() {
        let s = parse(
            "interface Repo extends Base<Foo, String> { Foo find(String id); int LIMIT = 3; }\n\
             enum Kind { A(1), B(2) { void x() {} }; private int v; int v() { return v; } }\n\
             record Point(int x, List<Seat> seats) { static int zero() { return 0; } }\n\
             class Outer { class Inner { int hidden; } private int shown; }\n\
             @interface Marker { String value() default \"\"; }",
        );
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].kind, TypeKind::Interface);
        assert!(s[0].fields.is_empty());
        assert_eq!(s[1].kind, TypeKind::Enum);
        assert_eq!(s[1].fields, vec![Field::new("int", "v")]);
        assert_eq!(s[2].kind, TypeKind::Record);
        assert_eq!(s[2].fields[1], Field::collection("Seat", "seats"));
        assert_eq!(s[3].fields, vec![Field::new("int", "shown")]);
        assert_eq!(s[4].kind, TypeKind::Annotation);
    }

    #[test]
    fn unbalanced_body_is_an_error() {
        let toks = tokenize("class A { void f() { ").unwrap();
        assert!(parse_compilation_unit(&toks, PathBuf::from("A.java"), &|_: &str| false).is_err());
    }

    #[test]
    fn split_respects_generics_and_parens() {
        let toks = tokenize("a, new HashMap<String, Integer>(), f(x, y), i < j").unwrap();
        assert_eq!(split_top_level(&toks, ',').len(), 4);
    }
}
