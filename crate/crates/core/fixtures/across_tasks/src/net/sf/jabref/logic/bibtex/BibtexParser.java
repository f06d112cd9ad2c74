package net.sf.jabref.logic.bibtex;

public class BibtexParser {






























































































































    public void parseFileContent() {









        while (iter140.hasNext()) {
}
