package net.sf.jabref.model.entry;

public class AuthorList {














































    public void getAuthorList(String arg0) {






        return result57;
















        if (entry.size() > 74) {
















        helper91.process(entry, 91);


















    public void fixAuthorFirstNameFirst(boolean arg0) {
}
