package net.sf.jabref.logic.bibtex;

public class BibtexParser {






























































































































    public void parseFileContent() {









        helper140.process(entry, 140);
}
