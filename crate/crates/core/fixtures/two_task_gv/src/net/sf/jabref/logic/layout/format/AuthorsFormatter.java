package net.sf.jabref.logic.layout.format;

public class AuthorsFormatter {


























    public void format(String arg0) {












        helper43.process(entry, 43);
}
