//! Main-text extraction from stored payloads.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use ego_tree::{NodeId, NodeRef};
use scraper::{ElementRef, Html, Node, Selector};
use serde::{Deserialize, Serialize};

use crate::corpus::MediaKind;
use crate::error::{Error, Result};

/// One CSS-selector rule. `include` rules replace the generic main-content
/// guess; `exclude` rules drop matching subtrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractionRule {
    Include(String),
    Exclude(String),
}

/// Per-platform selector overrides, keyed by platform identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtractionConfig {
    pub platforms: BTreeMap<String, Vec<ExtractionRule>>,
}

impl ExtractionConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: Self = serde_json::from_str(&raw).map_err(|e| Error::json(path, e))?;
        for rules in config.platforms.values() {
            for rule in rules {
                let (ExtractionRule::Include(s) | ExtractionRule::Exclude(s)) = rule;
                parse_selector(s)?;
            }
        }
        Ok(config)
    }

    pub fn rules_for(&self, platform: &str) -> &[ExtractionRule] {
        self.platforms
            .get(platform)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

const BOILERPLATE_SELECTOR: &str = "script, style, noscript, template, svg, iframe, object, \
     nav, header, footer, aside, form, button, select, \
     [aria-hidden=true], [role=navigation], [role=banner], [role=contentinfo], [hidden]";

const BOILERPLATE_MARKERS: &[&str] = &[
    "cookie",
    "breadcrumb",
    "navbar",
    "sidebar",
    "skip-link",
    "site-menu",
    "site-footer",
    "site-header",
];

const BLOCK_TAGS: &[&str] = &[
    "address",
    "article",
    "blockquote",
    "body",
    "dd",
    "details",
    "div",
    "dl",
    "dt",
    "fieldset",
    "figcaption",
    "figure",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "hr",
    "li",
    "main",
    "ol",
    "p",
    "pre",
    "section",
    "summary",
    "table",
    "tbody",
    "td",
    "tfoot",
    "th",
    "thead",
    "tr",
    "ul",
];

fn parse_selector(s: &str) -> Result<Selector> {
    Selector::parse(s).map_err(|e| Error::InvalidSelector {
        selector: s.to_string(),
        reason: e.to_string(),
    })
}

fn has_boilerplate_marker(el: &ElementRef<'_>) -> bool {
    let v = el.value();
    let id = v.id().unwrap_or("").to_ascii_lowercase();
    BOILERPLATE_MARKERS
        .iter()
        .any(|m| id.contains(m) || v.classes().any(|c| c.to_ascii_lowercase().contains(m)))
}

/// Extracts readable text from a stored payload.
///
/// HTML loses markup, script/style content and navigation boilerplate, and
/// block elements become paragraph breaks. Plain text only has its
/// whitespace normalised.
pub fn extract_text(
    payload: &[u8],
    media_kind: MediaKind,
    rules: &[ExtractionRule],
) -> Result<String> {
    if payload.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let decoded = String::from_utf8_lossy(payload);
    match media_kind {
        MediaKind::PlainText => Ok(normalize_whitespace(&decoded)),
        MediaKind::Html => extract_html(&decoded, rules),
    }
}

fn extract_html(source: &str, rules: &[ExtractionRule]) -> Result<String> {
    let html = Html::parse_document(source);

    let mut excluded: HashSet<NodeId> = HashSet::new();
    let boilerplate = parse_selector(BOILERPLATE_SELECTOR)?;
    excluded.extend(html.select(&boilerplate).map(|e| e.id()));
    let any = parse_selector("*")?;
    excluded.extend(
        html.select(&any)
            .filter(has_boilerplate_marker)
            .map(|e| e.id()),
    );

    let mut roots: Vec<ElementRef<'_>> = Vec::new();
    for rule in rules {
        match rule {
            ExtractionRule::Include(s) => roots.extend(html.select(&parse_selector(s)?)),
            ExtractionRule::Exclude(s) => {
                excluded.extend(html.select(&parse_selector(s)?).map(|e| e.id()))
            }
        }
    }
    if roots.is_empty() {
        for candidate in ["main, [role=main]", "article", "body"] {
            roots.extend(html.select(&parse_selector(candidate)?));
            if !roots.is_empty() {
                break;
            }
        }
    }
    if roots.is_empty() {
        roots.push(html.root_element());
    }

    // Nested roots would emit their text twice.
    let root_ids: HashSet<NodeId> = roots.iter().map(|r| r.id()).collect();
    roots.retain(|r| !r.ancestors().any(|a| root_ids.contains(&a.id())));

    let mut out = String::new();
    for root in roots {
        out.push_str("\n\n");
        walk(*root, &excluded, &mut out);
    }
    Ok(normalize_whitespace(&out))
}

fn walk(node: NodeRef<'_, Node>, excluded: &HashSet<NodeId>, out: &mut String) {
    match node.value() {
        Node::Text(text) => out.push_str(text),
        Node::Element(el) => {
            if excluded.contains(&node.id()) {
                return;
            }
            let name = el.name();
            if name == "br" {
                out.push('\n');
                return;
            }
            let block = BLOCK_TAGS.contains(&name);
            if block {
                out.push_str("\n\n");
            }
            for child in node.children() {
                walk(child, excluded, out);
            }
            if block {
                out.push_str("\n\n");
            }
        }
        _ => {
            for child in node.children() {
                walk(child, excluded, out);
            }
        }
    }
}

/// Collapses intra-line whitespace, joins the lines of a paragraph with a
/// single space, and separates paragraphs with exactly one blank line.
pub fn normalize_whitespace(text: &str) -> String {
    let mut paragraphs: Vec<String> = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for line in text.lines() {
        let collapsed = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(collapsed);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join(" "));
    }
    paragraphs.join("\n\n")
}
