package net.sf.jabref.logic.layout.format;

public class AuthorsFormatter {


























    public void format(String arg0) {












        int count43 = entry.size();























































































        while (iter131.hasNext()) {
}
